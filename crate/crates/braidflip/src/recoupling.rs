//! Quantum integers, theta and tetrahedral network evaluations, and q-6j
//! symbols at q = exp(i*pi/r).
//!
//! Everything is real double precision: q enters only through the quantum
//! integer [n] = sin(n*pi/r)/sin(pi/r). Normalizations follow the standard
//! Kauffman–Lins conventions; they are not trusted a priori but gated by the
//! orthogonality (Biedenharn–Elliott dual) and pentagon identity suites in
//! [`crate::identities`].

use crate::error::{Error, Result};

/// The level: r >= 3 fixes q = exp(i*pi/r) and the label range 0..=r-2.
///
/// Holds a precomputed quantum-factorial table. Quantum factorials vanish
/// identically from n = r onwards ([r] = 0); the table pins those entries to
/// exact zeros so the tetrahedral sum truncates cleanly.
#[derive(Debug, Clone)]
pub struct RecouplingParams {
    r: usize,
    qfact: Vec<f64>,
}

/// (-1)^n as a float.
fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl RecouplingParams {
    /// Panics if r < 3 (the theory needs at least one nontrivial label).
    pub fn new(r: usize) -> RecouplingParams {
        assert!(r >= 3, "level r must be at least 3, got {r}");
        let mut qfact = vec![0.0; 2 * r + 2];
        qfact[0] = 1.0;
        for n in 1..r {
            qfact[n] = qfact[n - 1] * qint_at(n, r);
        }
        // Entries r.. stay exactly zero: [r] = sin(pi) = 0.
        RecouplingParams { r, qfact }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Largest label: r - 2.
    pub fn max_label(&self) -> usize {
        self.r - 2
    }

    /// Quantum integer [n] = sin(n*pi/r)/sin(pi/r).
    pub fn qint(&self, n: usize) -> f64 {
        qint_at(n, self.r)
    }

    /// Quantum factorial [n]! = [1][2]...[n]; exactly 0 for n >= r.
    pub fn qfact(&self, n: usize) -> f64 {
        self.qfact.get(n).copied().unwrap_or(0.0)
    }

    /// Loop value of a strand with label n: (-1)^n [n+1]. Nonzero for
    /// n <= r-2.
    pub fn delta_n(&self, n: usize) -> f64 {
        sign(n) * self.qint(n + 1)
    }

    /// Whether (a,b,c) may meet at a triangle: even total, triangle
    /// inequalities, and total at most 2r-4.
    pub fn admissible(&self, a: usize, b: usize, c: usize) -> bool {
        (a + b + c) % 2 == 0
            && a + b >= c
            && a + c >= b
            && b + c >= a
            && a + b + c <= 2 * self.r - 4
    }

    fn require_admissible(&self, a: usize, b: usize, c: usize) -> Result<()> {
        if self.admissible(a, b, c) {
            Ok(())
        } else {
            Err(Error::InadmissibleTriple { a, b, c, r: self.r })
        }
    }

    /// Theta network value; nonzero (and finite) for every admissible
    /// triple — the level bound a+b+c <= 2r-4 keeps all factorial arguments
    /// below r.
    pub fn theta(&self, a: usize, b: usize, c: usize) -> Result<f64> {
        self.require_admissible(a, b, c)?;
        let x = (a + b - c) / 2;
        let y = (a + c - b) / 2;
        let z = (b + c - a) / 2;
        Ok(sign(x + y + z) * self.qfact(x + y + z + 1) * self.qfact(x) * self.qfact(y)
            * self.qfact(z)
            / (self.qfact(x + y) * self.qfact(x + z) * self.qfact(y + z)))
    }

    /// Tetrahedral network value by the single-sum evaluation over the four
    /// triangle half-sums and three square half-sums. Requires the triples
    /// (a,b,j), (c,d,j), (a,d,i), (b,c,i) to be admissible; all denominator
    /// factorial arguments are then at most r-2, so the evaluation is total.
    #[allow(clippy::many_single_char_names)]
    pub fn tet(&self, a: usize, b: usize, i: usize, c: usize, d: usize, j: usize) -> Result<f64> {
        self.require_admissible(a, b, j)?;
        self.require_admissible(c, d, j)?;
        self.require_admissible(a, d, i)?;
        self.require_admissible(b, c, i)?;
        let t_half = [
            (a + b + j) / 2,
            (c + d + j) / 2,
            (a + d + i) / 2,
            (b + c + i) / 2,
        ];
        let q_half = [(a + b + c + d) / 2, (a + c + i + j) / 2, (b + d + i + j) / 2];

        let mut prefactor = 1.0;
        for &q in &q_half {
            for &t in &t_half {
                prefactor *= self.qfact(q - t);
            }
        }
        prefactor /= self.qfact(a)
            * self.qfact(b)
            * self.qfact(c)
            * self.qfact(d)
            * self.qfact(i)
            * self.qfact(j);

        let s_min = *t_half.iter().max().expect("four half-sums");
        let s_max = *q_half.iter().min().expect("three half-sums");
        let mut total = 0.0;
        for s in s_min..=s_max {
            let mut term = sign(s) * self.qfact(s + 1);
            for &t in &t_half {
                term /= self.qfact(s - t);
            }
            for &q in &q_half {
                term /= self.qfact(q - s);
            }
            total += term;
        }
        Ok(prefactor * total)
    }

    /// The q-6j symbol in the normalization that enters flip operators:
    /// tet(a,b,i,c,d,j) * delta_n(i) / (theta(a,d,i) * theta(b,c,i)).
    /// Total: returns 0 unless all four support triples are admissible.
    #[allow(clippy::many_single_char_names)]
    pub fn sixj(&self, a: usize, b: usize, i: usize, c: usize, d: usize, j: usize) -> f64 {
        if !(self.admissible(a, b, j)
            && self.admissible(c, d, j)
            && self.admissible(a, d, i)
            && self.admissible(b, c, i))
        {
            return 0.0;
        }
        let tet = self.tet(a, b, i, c, d, j).expect("support triples admissible");
        let th1 = self.theta(a, d, i).expect("support triples admissible");
        let th2 = self.theta(b, c, i).expect("support triples admissible");
        tet * self.delta_n(i) / (th1 * th2)
    }
}

fn qint_at(n: usize, r: usize) -> f64 {
    let unit = std::f64::consts::PI / r as f64;
    (n as f64 * unit).sin() / unit.sin()
}
