use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_d2fix, check_diagonal, check_necessary_prop, check_pseudo, check_toft, IndexTuple};
use crate::norms::Recip;

/// Violation counts of the structural identities over the full `{0, 1/k, …, 1}⁶` lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeInvariants {
    pub k: i64,
    pub tuples: usize,
    /// Toft-admissible tuples rejected by the characterization.
    pub toft_outside_pseudo: usize,
    /// Admissible tuples that stop being admissible after shrinking `M^{p,q}` or
    /// `M^{r1,r2}`, or enlarging `M^{t1,t2}`, by one lattice step.
    pub monotonicity: usize,
    /// Tuples with `r2 ≤ r1` where `necessary-prop` at `(t1, t2) = (r2, r1)` and `d2fix` disagree.
    pub necessary_vs_d2fix: usize,
    /// Tuples where `diagonal` differs from `pseudo` at `r1 = r2`, `t1 = t2`.
    pub diagonal: usize,
    /// Up to ten offending tuples, for diagnostics.
    pub examples: Vec<String>,
}

impl LatticeInvariants {
    pub fn violations(&self) -> usize {
        self.toft_outside_pseudo + self.monotonicity + self.necessary_vs_d2fix + self.diagonal
    }
}

#[derive(Default)]
struct Counts {
    toft: usize,
    mono: usize,
    nec: usize,
    diag: usize,
    examples: Vec<String>,
}

impl Counts {
    fn note(&mut self, what: &str, t: &IndexTuple) {
        if self.examples.len() < 10 {
            self.examples.push(format!(
                "{what}: 1/p={} 1/q={} 1/r1={} 1/r2={} 1/t1={} 1/t2={}",
                t.p, t.q, t.r1, t.r2, t.t1, t.t2
            ));
        }
    }

    fn merge(mut self, o: Counts) -> Counts {
        self.toft += o.toft;
        self.mono += o.mono;
        self.nec += o.nec;
        self.diag += o.diag;
        self.examples.extend(o.examples);
        self.examples.truncate(10);
        self
    }
}

/// Steps a reciprocal one lattice notch up (`up`) or down, if it stays in `[0, 1]`.
fn step(lattice: &[Recip], i: usize, up: bool) -> Option<Recip> {
    if up {
        lattice.get(i + 1).copied()
    } else {
        i.checked_sub(1).map(|j| lattice[j])
    }
}

pub fn lattice_invariants(k: i64) -> LatticeInvariants {
    let lattice = Recip::lattice(k);
    let m = lattice.len();
    let total = m.pow(6);
    let counts = (0..total)
        .into_par_iter()
        .fold(Counts::default, |mut c, code| {
            let mut idx = [0usize; 6];
            let mut rest = code;
            for slot in idx.iter_mut() {
                *slot = rest % m;
                rest /= m;
            }
            let v = idx.map(|i| lattice[i]);
            let t = IndexTuple::new(v[0], v[1], v[2], v[3], v[4], v[5]);

            if check_toft(&t) && !check_pseudo(&t) {
                c.toft += 1;
                c.note("toft outside pseudo", &t);
            }
            // Smaller symbol class and domain: larger reciprocals. Larger target: smaller ones.
            let checkers: [(&str, fn(&IndexTuple) -> bool); 2] =
                [("pseudo", check_pseudo), ("necessary-prop", check_necessary_prop)];
            for (name, check) in checkers {
                if !check(&t) {
                    continue;
                }
                for (slot, up) in [(0, true), (1, true), (2, true), (3, true), (4, false), (5, false)] {
                    if let Some(nv) = step(&lattice, idx[slot], up) {
                        let mut s = v;
                        s[slot] = nv;
                        let moved = IndexTuple::new(s[0], s[1], s[2], s[3], s[4], s[5]);
                        if !check(&moved) {
                            c.mono += 1;
                            c.note(&format!("{name} not monotone"), &moved);
                        }
                    }
                }
            }
            if t.r2.value() >= t.r1.value() {
                let nec = check_necessary_prop(&IndexTuple::new(t.p, t.q, t.r1, t.r2, t.r2, t.r1));
                if nec != check_d2fix(t.p, t.q, t.r1, t.r2) {
                    c.nec += 1;
                    c.note("necessary-prop differs from d2fix", &t);
                }
            }
            let diag = IndexTuple::new(t.p, t.q, t.r1, t.r1, t.t1, t.t1);
            if check_diagonal(t.p, t.q, t.r1, t.t1) != check_pseudo(&diag) {
                c.diag += 1;
                c.note("diagonal differs from pseudo", &t);
            }
            c
        })
        .reduce(Counts::default, Counts::merge);
    LatticeInvariants {
        k,
        tuples: total,
        toft_outside_pseudo: counts.toft,
        monotonicity: counts.mono,
        necessary_vs_d2fix: counts.nec,
        diagonal: counts.diag,
        examples: counts.examples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_lattice_is_clean() {
        let inv = lattice_invariants(4);
        assert_eq!(inv.tuples, 15625);
        assert_eq!(inv.violations(), 0, "{:?}", inv.examples);
    }

    #[test]
    fn step_stays_on_lattice() {
        let l = Recip::lattice(2);
        assert_eq!(step(&l, 0, false), None);
        assert_eq!(step(&l, 2, true), None);
        assert_eq!(step(&l, 1, true), Some(Recip::ONE));
    }
}
