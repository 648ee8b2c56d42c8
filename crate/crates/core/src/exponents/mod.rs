//! Exact index conditions for boundedness of pseudodifferential operators and FIOs
//! between modulation spaces. Exponents are handled as reciprocals in `[0, 1]`.

mod invariants;
mod region;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::norms::Recip;

pub use invariants::{lattice_invariants, LatticeInvariants};
pub use region::{region_scan, Binding, Coord, RegionScan, RegionSpec, RegionSummary};

/// `1/p' = 1 - 1/p`.
pub fn conjugate(x: Recip) -> Recip {
    x.conjugate()
}

/// Symbol exponents `(p, q)`, domain `M^{r1,r2}`, target `M^{t1,t2}`, and the
/// weight parameters of the weighted theorems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexTuple {
    pub p: Recip,
    pub q: Recip,
    pub r1: Recip,
    pub r2: Recip,
    pub t1: Recip,
    pub t2: Recip,
    #[serde(default)]
    pub s1: f64,
    #[serde(default)]
    pub s2: f64,
    #[serde(default = "one")]
    pub d: u32,
}

fn one() -> u32 {
    1
}

impl IndexTuple {
    pub fn new(p: Recip, q: Recip, r1: Recip, r2: Recip, t1: Recip, t2: Recip) -> Self {
        IndexTuple {
            p,
            q,
            r1,
            r2,
            t1,
            t2,
            s1: 0.0,
            s2: 0.0,
            d: 1,
        }
    }

    pub fn weighted(mut self, s1: f64, s2: f64, d: u32) -> Self {
        self.s1 = s1;
        self.s2 = s2;
        self.d = d;
        self
    }

    /// `1 - 1/p - 1/q`.
    fn gap(&self) -> Ratio<i64> {
        Ratio::from_integer(1) - self.p.value() - self.q.value()
    }
}

/// `q ≤ min(xs)` written on reciprocals: `1/q ≥ max(1/x)`.
fn q_le_all(q: Recip, xs: &[Recip]) -> bool {
    xs.iter().all(|&x| q.value() >= x.value())
}

/// `s > d·x` exactly when `x` has small denominator.
fn exceeds(s: f64, d: u32, x: Ratio<i64>) -> bool {
    s * (*x.denom() as f64) > (d as f64) * (*x.numer() as f64)
}

/// `r ≤ t` on exponents.
fn le(r: Recip, t: Recip) -> bool {
    r.value() >= t.value()
}

/// Conditions (indicitutti) and (indiceq) of the characterization theorem.
pub fn check_pseudo(t: &IndexTuple) -> bool {
    let gap = t.gap();
    t.r1.value() - t.t1.value() >= gap
        && t.r2.value() - t.t2.value() >= gap
        && q_le_all(t.q, &[t.t1, t.t2, t.r1.conjugate(), t.r2.conjugate()])
}

/// `q ≤ min(t, r')` and `1/r - 1/t ≥ 1 - 1/p - 1/q`.
pub fn check_diagonal(p: Recip, q: Recip, r: Recip, t: Recip) -> bool {
    check_pseudo(&IndexTuple::new(p, q, r, r, t, t))
}

/// `r2 ≤ r1`, `q ≤ min(r2, r1')`, `1/p + 1/q ≥ 1`; target `M^{r2,r1}`.
pub fn check_d2fix(p: Recip, q: Recip, r1: Recip, r2: Recip) -> bool {
    le(r2, r1) && q_le_all(q, &[r2, r1.conjugate()]) && p.value() + q.value() >= Ratio::from_integer(1)
}

/// Toft's conditions: `1/r1 - 1/t1 = 1/r2 - 1/t2 = 1 - 1/p - 1/q` and `q ≤ t1, t2 ≤ p`.
pub fn check_toft(t: &IndexTuple) -> bool {
    let gap = t.gap();
    t.r1.value() - t.t1.value() == gap
        && t.r2.value() - t.t2.value() == gap
        && [t.t1, t.t2].iter().all(|&ti| le(t.q, ti) && le(ti, t.p))
}

/// `r_i ≤ t_i`, `i = 1, 2`.
pub fn check_schrodinger_multiplier(r1: Recip, r2: Recip, t1: Recip, t2: Recip) -> bool {
    le(r1, t1) && le(r2, t2)
}

/// Alternatives (i)–(iii) of the weighted `M^{∞,1}` theorem on `M^{r1,r2}`.
pub fn check_weighted_elefabio(r1: Recip, r2: Recip, s1: f64, s2: f64, d: u32) -> bool {
    let (a, b) = (r1.value(), r2.value());
    if a == b {
        s1 >= 0.0 && s2 >= 0.0
    } else if b > a {
        // r2 < r1
        exceeds(s1, d, b - a) && s2 >= 0.0
    } else {
        s1 >= 0.0 && exceeds(s2, d, a - b)
    }
}

/// The weighted theorem for general `M^{p,q}` symbols, exactly as printed: (indicitutti)
/// together with one of the four alternatives, each with a strict weight threshold.
pub fn check_weighted_main(t: &IndexTuple) -> bool {
    let gap = t.gap();
    if !(t.r1.value() - t.t1.value() >= gap && t.r2.value() - t.t2.value() >= gap) {
        return false;
    }
    let (r1c, r2c) = (t.r1.conjugate(), t.r2.conjugate());
    let i = t.s2 >= 0.0
        && ((q_le_all(t.q, &[t.t1, t.t2, r1c]) && le(t.r2, t.r1) && exceeds(t.s1, t.d, t.r2.value() - t.r1.value()))
            || (q_le_all(t.q, &[t.t2, r1c, r2c])
                && le(t.t2, t.t1)
                && exceeds(t.s1, t.d, t.t2.value() - t.t1.value())));
    let ii = t.s1 >= 0.0
        && ((q_le_all(t.q, &[t.t1, t.t2, r2c]) && le(t.r1, t.r2) && exceeds(t.s2, t.d, t.r1.value() - t.r2.value()))
            || (q_le_all(t.q, &[t.t1, r1c, r2c])
                && le(t.t1, t.t2)
                && exceeds(t.s2, t.d, t.t1.value() - t.t2.value())));
    i || ii
}

/// Necessary conditions for the chirp phase `|x|²/2 + x·η`:
/// `1/r_i - 1/t2 ≥ 1 - 1/p - 1/q` and `q ≤ min(t1, t2, r1', r2')`.
pub fn check_necessary_prop(t: &IndexTuple) -> bool {
    let gap = t.gap();
    t.r1.value() - t.t2.value() >= gap
        && t.r2.value() - t.t2.value() >= gap
        && q_le_all(t.q, &[t.t1, t.t2, t.r1.conjugate(), t.r2.conjugate()])
}

/// Checkers addressable by name from configuration files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckerId {
    Pseudo,
    Diagonal,
    D2fix,
    Toft,
    SchrodingerMultiplier,
    WeightedElefabio,
    WeightedMain,
    NecessaryProp,
}

impl CheckerId {
    pub const ALL: [CheckerId; 8] = [
        CheckerId::Pseudo,
        CheckerId::Diagonal,
        CheckerId::D2fix,
        CheckerId::Toft,
        CheckerId::SchrodingerMultiplier,
        CheckerId::WeightedElefabio,
        CheckerId::WeightedMain,
        CheckerId::NecessaryProp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckerId::Pseudo => "pseudo",
            CheckerId::Diagonal => "diagonal",
            CheckerId::D2fix => "d2fix",
            CheckerId::Toft => "toft",
            CheckerId::SchrodingerMultiplier => "schrodinger-multiplier",
            CheckerId::WeightedElefabio => "weighted-elefabio",
            CheckerId::WeightedMain => "weighted-main",
            CheckerId::NecessaryProp => "necessary-prop",
        }
    }

    /// Evaluates on a full tuple. `diagonal` reads `(p, q, r1, t1)`, `d2fix` reads
    /// `(p, q, r1, r2)`, and the weighted `M^{∞,1}` checker reads `(r1, r2, s1, s2, d)`.
    pub fn check(self, t: &IndexTuple) -> bool {
        match self {
            CheckerId::Pseudo => check_pseudo(t),
            CheckerId::Diagonal => check_diagonal(t.p, t.q, t.r1, t.t1),
            CheckerId::D2fix => check_d2fix(t.p, t.q, t.r1, t.r2),
            CheckerId::Toft => check_toft(t),
            CheckerId::SchrodingerMultiplier => check_schrodinger_multiplier(t.r1, t.r2, t.t1, t.t2),
            CheckerId::WeightedElefabio => check_weighted_elefabio(t.r1, t.r2, t.s1, t.s2, t.d),
            CheckerId::WeightedMain => check_weighted_main(t),
            CheckerId::NecessaryProp => check_necessary_prop(t),
        }
    }
}

impl std::str::FromStr for CheckerId {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        CheckerId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| crate::Error::parameter(format!("unknown checker `{s}`")))
    }
}

impl std::fmt::Display for CheckerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Recip {
        s.parse().unwrap()
    }

    fn tuple(s: [&str; 6]) -> IndexTuple {
        IndexTuple::new(r(s[0]), r(s[1]), r(s[2]), r(s[3]), r(s[4]), r(s[5]))
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(Recip::ZERO), Recip::ONE);
        assert_eq!(conjugate(Recip::HALF), Recip::HALF);
        assert_eq!(conjugate(Recip::new(1, 3).unwrap()), Recip::new(2, 3).unwrap());
    }

    #[test]
    fn pseudo_examples() {
        for x in ["1", "4/3", "2", "3", "inf"] {
            assert!(check_pseudo(&tuple(["inf", "1", x, x, x, x])));
        }
        assert!(check_pseudo(&tuple(["2"; 6])));
        assert!(!check_pseudo(&tuple(["inf", "2", "2", "2", "2", "2"])));
        assert!(check_pseudo(&tuple(["1", "1", "inf", "inf", "1", "1"])));
    }

    #[test]
    fn diagonal_and_d2fix_examples() {
        assert!(check_diagonal(r("inf"), r("1"), r("3"), r("3")));
        assert!(check_diagonal(r("2"), r("2"), r("2"), r("2")));
        assert!(check_diagonal(r("1"), r("inf"), r("1"), r("inf")));
        assert!(check_d2fix(r("inf"), r("1"), r("4"), r("2")));
        assert!(check_d2fix(r("2"), r("2"), r("2"), r("2")));
        assert!(!check_d2fix(r("inf"), r("2"), r("2"), r("2")));
    }

    #[test]
    fn toft_and_multiplier_examples() {
        assert!(check_toft(&tuple(["2"; 6])));
        assert!(check_toft(&tuple(["inf", "1", "3", "3", "3", "3"])));
        assert!(!check_toft(&tuple(["2", "1", "2", "2", "2", "2"])));
        assert!(check_schrodinger_multiplier(r("2"), r("3"), r("2"), r("3")));
        assert!(check_schrodinger_multiplier(r("1"), r("2"), r("2"), r("2")));
        assert!(!check_schrodinger_multiplier(r("2"), r("1"), r("1"), r("1")));
    }

    #[test]
    fn weighted_examples() {
        assert!(check_weighted_elefabio(r("2"), r("2"), 0.0, 0.0, 1));
        assert!(check_weighted_elefabio(r("2"), r("1"), 0.6, 0.0, 1));
        assert!(!check_weighted_elefabio(r("2"), r("1"), 0.5, 0.0, 1));
        assert!(!check_weighted_elefabio(r("1"), r("2"), 0.0, 0.4, 1));
        assert!(check_weighted_elefabio(r("1"), r("2"), 0.0, 1.1, 2));

        let base = tuple(["inf", "1", "inf", "1", "inf", "1"]);
        assert!(check_weighted_main(&base.weighted(1.1, 0.0, 1)));
        assert!(!check_weighted_main(&base.weighted(1.0, 0.0, 1)));
        // Literal strict thresholds: r1 = r2 with zero weights satisfies no alternative.
        for x in ["1", "2", "inf"] {
            assert!(!check_weighted_main(&tuple(["inf", "1", x, x, x, x])));
        }
        assert!(check_weighted_main(&tuple(["inf", "1", "2", "2", "2", "2"]).weighted(0.1, 0.0, 1)));
    }

    #[test]
    fn necessary_examples() {
        assert!(check_necessary_prop(&tuple(["inf", "1", "2", "2", "2", "2"])));
        assert!(!check_necessary_prop(&tuple(["2", "2", "inf", "inf", "1", "1"])));
    }

    #[test]
    fn checker_ids_round_trip() {
        for c in CheckerId::ALL {
            assert_eq!(c.name().parse::<CheckerId>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
        assert!("nope".parse::<CheckerId>().is_err());
    }

    #[test]
    fn tuple_serde() {
        let t: IndexTuple =
            serde_json::from_str(r#"{"p":"inf","q":1,"r1":"2","r2":2,"t1":"3/2","t2":"inf","s1":0.5}"#).unwrap();
        assert_eq!(t.t1, Recip::new(2, 3).unwrap());
        assert_eq!(t.d, 1);
        assert_eq!(t.s1, 0.5);
    }
}
