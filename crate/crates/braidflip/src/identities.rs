//! Identity suites for pentagon tuples: orthogonality (the inverse-flip
//! axiom) and the pentagon identity itself.
//!
//! These are the correctness gates for the 6j normalization: the symbol
//! formulas are not trusted until both suites pass at the declared
//! tolerances.

use crate::error::{Error, Result};
use crate::pentagon::PentagonTuple;

/// Outcome of scanning one identity over many argument tuples.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// Number of argument tuples checked.
    pub checked: usize,
    /// Largest absolute deviation from the identity.
    pub worst_dev: f64,
    /// Human-readable rendering of the worst argument tuple.
    pub worst_case: String,
}

impl IdentityReport {
    fn new() -> IdentityReport {
        IdentityReport { checked: 0, worst_dev: 0.0, worst_case: String::new() }
    }

    fn record(&mut self, dev: f64, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if dev > self.worst_dev {
            self.worst_dev = dev;
            self.worst_case = describe();
        }
    }
}

fn finite_labels<T>(tuple: &T) -> Result<Vec<T::Label>>
where
    T: PentagonTuple,
{
    tuple.label_list().ok_or(Error::InfiniteLabelSet)
}

/// Orthogonality: summing a flip against the reverse flip over the shared
/// new diagonal must give the identity on admissible old diagonals,
///
///   sum_i sixj(a,b,i,c,d,j) * sixj(d,a,k,b,c,i)
///     = [k = j and (a,b,j), (c,d,j) admissible],
///
/// scanned exhaustively over all label 6-tuples (a,b,c,d,j,k).
pub fn orthogonality_suite<T>(tuple: &T) -> Result<IdentityReport>
where
    T: PentagonTuple,
{
    let labels = finite_labels(tuple)?;
    let mut report = IdentityReport::new();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    for &j in &labels {
                        for &k in &labels {
                            let mut acc = 0.0;
                            for &i in &labels {
                                acc += tuple.sixj(a, b, i, c, d, j)
                                    * tuple.sixj(d, a, k, b, c, i);
                            }
                            let want = if k == j
                                && tuple.admissible(a, b, j)
                                && tuple.admissible(c, d, j)
                            {
                                1.0
                            } else {
                                0.0
                            };
                            report.record((acc - want).abs(), || {
                                format!("(a,b,c,d,j,k) = ({a:?},{b:?},{c:?},{d:?},{j:?},{k:?})")
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// One pentagon-identity instance:
///
///   sum_m sixj(a,i,m,d,e,j) * sixj(b,c,l,d,m,i) * sixj(b,l,k,e,a,m)
///     = sixj(b,c,k,j,a,i) * sixj(k,c,l,d,e,j).
fn pentagon_deviation<T>(tuple: &T, labels: &[T::Label], args: [T::Label; 9]) -> f64
where
    T: PentagonTuple,
{
    let [a, b, c, d, e, i, j, k, l] = args;
    let mut lhs = 0.0;
    for &m in labels {
        lhs += tuple.sixj(a, i, m, d, e, j)
            * tuple.sixj(b, c, l, d, m, i)
            * tuple.sixj(b, l, k, e, a, m);
    }
    let rhs = tuple.sixj(b, c, k, j, a, i) * tuple.sixj(k, c, l, d, e, j);
    (lhs - rhs).abs()
}

/// Exhaustive pentagon scan over all label 9-tuples. Feasible for small
/// label sets (the count is |labels|^9).
pub fn pentagon_suite_exhaustive<T>(tuple: &T) -> Result<IdentityReport>
where
    T: PentagonTuple,
{
    let labels = finite_labels(tuple)?;
    let n = labels.len();
    let mut report = IdentityReport::new();
    let total = n.pow(9);
    for flat in 0..total {
        let mut rem = flat;
        let mut args = [labels[0]; 9];
        for slot in (0..9).rev() {
            args[slot] = labels[rem % n];
            rem /= n;
        }
        let dev = pentagon_deviation(tuple, &labels, args);
        report.record(dev, || format!("{args:?}"));
    }
    Ok(report)
}

/// Pentagon scan over `count` pseudo-random label 9-tuples from a
/// deterministic linear-congruential stream seeded by `seed`.
pub fn pentagon_suite_random<T>(tuple: &T, count: usize, seed: u64) -> Result<IdentityReport>
where
    T: PentagonTuple,
{
    let labels = finite_labels(tuple)?;
    let n = labels.len() as u64;
    let mut state = seed;
    let mut draw = || {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        labels[((state >> 33) % n) as usize]
    };
    let mut report = IdentityReport::new();
    for _ in 0..count {
        let args = [
            draw(),
            draw(),
            draw(),
            draw(),
            draw(),
            draw(),
            draw(),
            draw(),
            draw(),
        ];
        let dev = pentagon_deviation(tuple, &labels, args);
        report.record(dev, || format!("{args:?}"));
    }
    Ok(report)
}
