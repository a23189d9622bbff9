//! Two-variable test problem with 42 local minima and 143 stationary points,
//! built from truncated product expansions of `sin` and `cos`:
//!
//! ```text
//! r₁ = a·s·∏_{k=1}^{3} (1 − s²/(k²π²)),          s = x + y
//! r₂ = a·∏_{k=1}^{3} (1 − d²/((k − ½)²π²)),      d = x − y
//! r₃ = a + 0.01·(x² + y²)
//! ```
//!
//! Without the leading `s` factor in `r₁` (a truncated `cos`-style product in
//! both rows) the landscape has 36 minima and 121 stationary points, so the
//! `sin` product is the reading that matches the expected counts.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::numerics::DenseMatrix;
use crate::problem::{Problem, ProblemError};

/// Polynomial in ascending powers.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<f64>);

impl Poly {
    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

/// Value and first two derivatives of a fixed polynomial.
#[derive(Debug, Clone, PartialEq)]
struct Profile {
    p: Poly,
    dp: Poly,
    d2p: Poly,
}

impl Profile {
    fn new(p: Poly) -> Self {
        let dp = p.derivative();
        let d2p = dp.derivative();
        Self { p, dp, d2p }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FTrig {
    a: f64,
    sine: Profile,
    cosine: Profile,
}

pub fn ftrig(a: f64) -> Result<FTrig, ProblemError> {
    FTrig::new(a)
}

impl FTrig {
    pub fn new(a: f64) -> Result<Self, ProblemError> {
        if a == 0.0 || !a.is_finite() {
            return Err(ProblemError::InvalidParameters(
                "ftrig height `a` must be finite and nonzero".into(),
            ));
        }
        let factor = |root_sq: f64| Poly(vec![1.0, 0.0, -1.0 / root_sq]);
        let mut sine = Poly(vec![0.0, 1.0]);
        let mut cosine = Poly(vec![1.0]);
        for k in 1..=3 {
            let k = k as f64;
            sine = sine.mul(&factor(k * k * PI * PI));
            cosine = cosine.mul(&factor((k - 0.5) * (k - 0.5) * PI * PI));
        }
        Ok(Self {
            a,
            sine: Profile::new(sine),
            cosine: Profile::new(cosine),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

impl Problem for FTrig {
    type Scalar = f64;

    fn name(&self) -> &str {
        "ftrig"
    }

    fn num_params(&self) -> usize {
        2
    }

    fn num_residuals(&self) -> usize {
        3
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        self.check_dimension(x)?;
        let (s, d) = (x[0] + x[1], x[0] - x[1]);
        Ok(vec![
            self.a * self.sine.p.eval(s),
            self.a * self.cosine.p.eval(d),
            self.a + 0.01 * (x[0] * x[0] + x[1] * x[1]),
        ])
    }

    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        self.check_dimension(x)?;
        let (s, d) = (x[0] + x[1], x[0] - x[1]);
        let g = self.a * self.sine.dp.eval(s);
        let h = self.a * self.cosine.dp.eval(d);
        Ok(DenseMatrix::from_row_slice(
            3,
            2,
            &[g, g, h, -h, 0.02 * x[0], 0.02 * x[1]],
        )?)
    }

    fn residual_hessians(&self, x: &[f64]) -> Option<Result<Vec<DenseMatrix<f64>>, ProblemError>> {
        if let Err(e) = self.check_dimension(x) {
            return Some(Err(e));
        }
        let (s, d) = (x[0] + x[1], x[0] - x[1]);
        let g = self.a * self.sine.d2p.eval(s);
        let h = self.a * self.cosine.d2p.eval(d);
        let m = |v: [f64; 4]| DenseMatrix::from_row_slice(2, 2, &v).expect("2x2");
        Some(Ok(vec![
            m([g, g, g, g]),
            m([h, -h, -h, h]),
            DenseMatrix::diagonal(&[0.02, 0.02]),
        ]))
    }

    fn bounds(&self) -> Option<Vec<(f64, f64)>> {
        Some(vec![(-10.0, 10.0), (-10.0, 10.0)])
    }
}
