use std::collections::BTreeMap;
use std::io::Write;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CheckerId, IndexTuple};
use crate::error::{Error, Result};
use crate::norms::Recip;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    P,
    Q,
    R1,
    R2,
    T1,
    T2,
}

impl Coord {
    pub const ALL: [Coord; 6] = [Coord::P, Coord::Q, Coord::R1, Coord::R2, Coord::T1, Coord::T2];

    pub fn name(self) -> &'static str {
        match self {
            Coord::P => "p",
            Coord::Q => "q",
            Coord::R1 => "r1",
            Coord::R2 => "r2",
            Coord::T1 => "t1",
            Coord::T2 => "t2",
        }
    }

    fn slot(self, t: &mut IndexTuple) -> &mut Recip {
        match self {
            Coord::P => &mut t.p,
            Coord::Q => &mut t.q,
            Coord::R1 => &mut t.r1,
            Coord::R2 => &mut t.r2,
            Coord::T1 => &mut t.t1,
            Coord::T2 => &mut t.t2,
        }
    }
}

/// How a coordinate enters a scan: one of the two plotted axes, a fixed value,
/// equal to another coordinate, or projected out (admissible for some lattice value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Binding {
    Free,
    Fixed(Recip),
    Tied(Coord),
    Projected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub checker: CheckerId,
    /// Lattice step `1/k`.
    pub k: i64,
    pub bindings: BTreeMap<Coord, Binding>,
    #[serde(default)]
    pub s1: f64,
    #[serde(default)]
    pub s2: f64,
    #[serde(default = "default_d")]
    pub d: u32,
}

fn default_d() -> u32 {
    1
}

impl RegionSpec {
    pub fn new(checker: CheckerId, k: i64, bindings: &[(Coord, Binding)]) -> Self {
        RegionSpec {
            checker,
            k,
            bindings: bindings.iter().copied().collect(),
            s1: 0.0,
            s2: 0.0,
            d: 1,
        }
    }

    /// Figure 1: the `(1/p, 1/q)` plane with `t_i = r_i`, projecting out `t1, t2`.
    pub fn figure1(checker: CheckerId, k: i64) -> Self {
        RegionSpec::new(
            checker,
            k,
            &[
                (Coord::P, Binding::Free),
                (Coord::Q, Binding::Free),
                (Coord::T1, Binding::Projected),
                (Coord::T2, Binding::Projected),
                (Coord::R1, Binding::Tied(Coord::T1)),
                (Coord::R2, Binding::Tied(Coord::T2)),
            ],
        )
    }

    /// Figure 2: the `(1/q, 1/t1)` plane with `t_i = r_i`, projecting out `p, t2`.
    pub fn figure2(checker: CheckerId, k: i64) -> Self {
        RegionSpec::new(
            checker,
            k,
            &[
                (Coord::Q, Binding::Free),
                (Coord::T1, Binding::Free),
                (Coord::P, Binding::Projected),
                (Coord::T2, Binding::Projected),
                (Coord::R1, Binding::Tied(Coord::T1)),
                (Coord::R2, Binding::Tied(Coord::T2)),
            ],
        )
    }

    fn binding(&self, c: Coord) -> Binding {
        self.bindings.get(&c).copied().unwrap_or(Binding::Fixed(Recip::ZERO))
    }

    fn validate(&self) -> Result<(Coord, Coord)> {
        if self.k < 1 {
            return Err(Error::parameter(format!("lattice resolution k must be positive, got {}", self.k)));
        }
        if let Some(c) = Coord::ALL.into_iter().find(|c| !self.bindings.contains_key(c)) {
            return Err(Error::parameter(format!("no binding for {}", c.name())));
        }
        let free: Vec<Coord> = Coord::ALL.into_iter().filter(|&c| self.binding(c) == Binding::Free).collect();
        if free.len() != 2 {
            return Err(Error::parameter(format!(
                "a region scan needs exactly two free coordinates, got {}",
                free.len()
            )));
        }
        for c in Coord::ALL {
            if let Binding::Tied(o) = self.binding(c) {
                if o == c || matches!(self.binding(o), Binding::Tied(_)) {
                    return Err(Error::parameter(format!("{} is tied to a tied coordinate", c.name())));
                }
            }
        }
        Ok((free[0], free[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionSummary {
    pub checker: CheckerId,
    pub k: i64,
    pub free: (Coord, Coord),
    pub fixed: BTreeMap<Coord, Recip>,
    pub projected: Vec<Coord>,
    pub admissible_count: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan {
    pub spec: RegionSpec,
    pub axes: (Coord, Coord),
    /// `admissible[[i, j]]` for first coordinate `i/k` and second `j/k`.
    pub admissible: Array2<bool>,
}

impl RegionScan {
    pub fn admissible_count(&self) -> usize {
        self.admissible.iter().filter(|&&b| b).count()
    }

    pub fn summary(&self) -> RegionSummary {
        let mut fixed = BTreeMap::new();
        let mut projected = Vec::new();
        for c in Coord::ALL {
            match self.spec.binding(c) {
                Binding::Fixed(v) => {
                    fixed.insert(c, v);
                }
                Binding::Projected => projected.push(c),
                _ => {}
            }
        }
        RegionSummary {
            checker: self.spec.checker,
            k: self.spec.k,
            free: self.axes,
            fixed,
            projected,
            admissible_count: self.admissible_count(),
            total: self.admissible.len(),
        }
    }

    /// Header `1/a,1/b,admissible`, reciprocals as `num/den`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            format!("1/{}", self.axes.0.name()),
            format!("1/{}", self.axes.1.name()),
            "admissible".to_string(),
        ])?;
        let lattice = Recip::lattice(self.spec.k);
        for ((i, j), &ok) in self.admissible.indexed_iter() {
            w.write_record([lattice[i].fraction(), lattice[j].fraction(), ok.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exhaustive exact evaluation on the `(k+1)²` lattice of the two free coordinates.
pub fn region_scan(spec: &RegionSpec) -> Result<RegionScan> {
    let (a, b) = spec.validate()?;
    let lattice = Recip::lattice(spec.k);
    let projected: Vec<Coord> = Coord::ALL
        .into_iter()
        .filter(|&c| spec.binding(c) == Binding::Projected)
        .collect();
    let m = lattice.len();
    let combos = m.pow(projected.len() as u32);
    let cells: Vec<bool> = (0..m * m)
        .into_par_iter()
        .map(|cell| {
            let mut t = IndexTuple::new(Recip::ZERO, Recip::ZERO, Recip::ZERO, Recip::ZERO, Recip::ZERO, Recip::ZERO)
                .weighted(spec.s1, spec.s2, spec.d);
            for c in Coord::ALL {
                if let Binding::Fixed(v) = spec.binding(c) {
                    *c.slot(&mut t) = v;
                }
            }
            *a.slot(&mut t) = lattice[cell / m];
            *b.slot(&mut t) = lattice[cell % m];
            (0..combos).any(|mut idx| {
                for &c in &projected {
                    *c.slot(&mut t) = lattice[idx % m];
                    idx /= m;
                }
                for c in Coord::ALL {
                    if let Binding::Tied(o) = spec.binding(c) {
                        let v = *o.slot(&mut t);
                        *c.slot(&mut t) = v;
                    }
                }
                spec.checker.check(&t)
            })
        })
        .collect();
    Ok(RegionScan {
        spec: spec.clone(),
        axes: (a, b),
        admissible: Array2::from_shape_vec((m, m), cells).expect("cell count matches lattice"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_counts() {
        let toft = region_scan(&RegionSpec::figure1(CheckerId::Toft, 64)).unwrap();
        let pseudo = region_scan(&RegionSpec::figure1(CheckerId::Pseudo, 64)).unwrap();
        assert_eq!(toft.admissible_count(), 33);
        assert_eq!(pseudo.admissible_count(), 1617);
        assert!(toft.admissible.iter().zip(&pseudo.admissible).all(|(&t, &p)| !t || p));

        let toft2 = region_scan(&RegionSpec::figure2(CheckerId::Toft, 64)).unwrap();
        let pseudo2 = region_scan(&RegionSpec::figure2(CheckerId::Pseudo, 64)).unwrap();
        assert_eq!(toft2.admissible, pseudo2.admissible);
        assert_eq!(toft2.admissible_count(), 1089);
    }

    #[test]
    fn fixed_slice_and_errors() {
        let mut spec = RegionSpec::new(
            CheckerId::Pseudo,
            4,
            &[
                (Coord::P, Binding::Free),
                (Coord::Q, Binding::Free),
                (Coord::R1, Binding::Fixed(Recip::HALF)),
                (Coord::R2, Binding::Fixed(Recip::HALF)),
                (Coord::T1, Binding::Tied(Coord::R1)),
                (Coord::T2, Binding::Tied(Coord::R2)),
            ],
        );
        let scan = region_scan(&spec).unwrap();
        // 1/p + 1/q ≥ 1 and 1/q ≥ 1/2 on the 5 × 5 lattice.
        assert_eq!(scan.admissible_count(), 3 + 4 + 5);
        let mut out = Vec::new();
        scan.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("1/p,1/q,admissible\n0/1,0/1,false\n"));
        assert_eq!(text.lines().count(), 26);
        let summary = scan.summary();
        assert_eq!(summary.fixed.len(), 2);
        let json = serde_json::to_value(&summary).unwrap();
        assert_eq!(json["admissibleCount"], 12);
        assert_eq!(json["checker"], "pseudo");

        spec.bindings.insert(Coord::R1, Binding::Free);
        assert!(region_scan(&spec).is_err());
        spec.bindings.insert(Coord::R1, Binding::Tied(Coord::T1));
        assert!(region_scan(&spec).is_err());
    }

    #[test]
    fn spec_json() {
        let spec: RegionSpec = serde_json::from_str(
            r#"{"checker":"toft","k":8,"bindings":{"p":"free","q":"free","r1":{"fixed":"2"},"r2":{"fixed":2},"t1":{"tied":"r1"},"t2":{"tied":"r2"}}}"#,
        )
        .unwrap();
        assert_eq!(spec.binding(Coord::R1), Binding::Fixed(Recip::HALF));
        assert_eq!(region_scan(&spec).unwrap().admissible_count(), 5);
    }
}
