//! Spin Hamiltonians in Stevens-operator form and the inverse eigenvalue problem
//! of recovering their coefficients from a spectrum.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Float math for toolchains whose `core` lacks it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::numerics::{symmetric_eigen, DenseMatrix, SymmetricEigen};
use crate::problem::{Problem, ProblemError};

/// The four Stevens operators used for an axial molecular magnet, in the
/// `|S⟩, |S−1⟩, …, |−S⟩` basis.
#[derive(Debug, Clone)]
pub struct StevensOperators {
    pub spin: f64,
    pub o20: DenseMatrix<f64>,
    pub o22: DenseMatrix<f64>,
    pub o40: DenseMatrix<f64>,
    pub o44: DenseMatrix<f64>,
}

impl StevensOperators {
    pub fn dimension(&self) -> usize {
        self.o20.rows()
    }

    /// `[O₂⁰, O₄⁰, O₂², O₄⁴]`, the parameter order `(B₂⁰, B₄⁰, B₂², B₄⁴)`.
    pub fn basis(&self) -> Vec<DenseMatrix<f64>> {
        vec![
            self.o20.clone(),
            self.o40.clone(),
            self.o22.clone(),
            self.o44.clone(),
        ]
    }
}

pub fn stevens_operators(spin: f64) -> Result<StevensOperators, ProblemError> {
    let two_s = 2.0 * spin;
    if !(spin >= 1.0 && two_s.fract() == 0.0 && spin.is_finite()) {
        return Err(ProblemError::InvalidParameters(format!(
            "spin must be a half-integer >= 1, got {spin}"
        )));
    }
    let dim = two_s as usize + 1;
    let x = spin * (spin + 1.0);
    let sz: Vec<f64> = (1..=dim).map(|k| spin + 1.0 - k as f64).collect();

    let o20 = DenseMatrix::diagonal(&sz.iter().map(|z| 3.0 * z * z - x).collect::<Vec<_>>());
    let o40 = DenseMatrix::diagonal(
        &sz.iter()
            .map(|z| {
                let z2 = z * z;
                35.0 * z2 * z2 - (30.0 * x - 25.0) * z2 + (3.0 * x * x - 6.0 * x)
            })
            .collect::<Vec<_>>(),
    );

    // (S₊)_{k,k+1} = √(k(2S+1−k)) with 1-based k.
    let s_plus = DenseMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            let k = (i + 1) as f64;
            (k * (two_s + 1.0 - k)).sqrt()
        } else {
            0.0
        }
    });
    let sp2 = s_plus.matmul(&s_plus)?;
    let sp4 = sp2.matmul(&sp2)?;
    let o22 = sp2.add_scaled(1.0, &sp2.adjoint())?.scaled(0.5);
    let o44 = sp4.add_scaled(1.0, &sp4.adjoint())?.scaled(0.5);

    Ok(StevensOperators {
        spin,
        o20,
        o22,
        o40,
        o44,
    })
}

/// Relative eigenvalue gap below which the spectrum counts as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// `rᵢ(x) = λᵢ(A₀ + Σⱼ xⱼAⱼ) − λᵢ*` with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct IepProblem {
    name: String,
    a0: DenseMatrix<f64>,
    basis: Vec<DenseMatrix<f64>>,
    targets: Vec<f64>,
}

pub fn iep_problem(
    basis: Vec<DenseMatrix<f64>>,
    a0: DenseMatrix<f64>,
    targets: Vec<f64>,
) -> Result<IepProblem, ProblemError> {
    IepProblem::new("iep", basis, a0, targets)
}

impl IepProblem {
    pub fn new(
        name: &str,
        basis: Vec<DenseMatrix<f64>>,
        a0: DenseMatrix<f64>,
        targets: Vec<f64>,
    ) -> Result<Self, ProblemError> {
        let n = a0.rows();
        let invalid = |msg: &str| Err(ProblemError::InvalidParameters(msg.into()));
        if basis.is_empty() {
            return invalid("IEP needs at least one basis matrix");
        }
        if targets.len() != n {
            return invalid("IEP needs one target per eigenvalue");
        }
        if targets.windows(2).any(|w| w[0] > w[1]) {
            return invalid("IEP targets must be sorted ascending");
        }
        for a in core::iter::once(&a0).chain(&basis) {
            if a.shape() != (n, n) {
                return invalid("IEP matrices must share one square shape");
            }
            if a.add_scaled(-1.0, &a.adjoint())?.max_abs() > 1e-12 * (1.0 + a.max_abs()) {
                return invalid("IEP matrices must be symmetric");
            }
        }
        Ok(Self {
            name: name.into(),
            a0,
            basis,
            targets,
        })
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn basis(&self) -> &[DenseMatrix<f64>] {
        &self.basis
    }

    /// `A(x) = A₀ + Σ xⱼAⱼ`.
    pub fn matrix(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        self.check_dimension(x)?;
        let mut a = self.a0.clone();
        for (aj, &xj) in self.basis.iter().zip(x) {
            a = a.add_scaled(xj, aj)?;
        }
        Ok(a)
    }

    pub fn eigen(&self, x: &[f64]) -> Result<SymmetricEigen, ProblemError> {
        Ok(symmetric_eigen(&self.matrix(x)?)?)
    }

    fn simple_eigen(&self, x: &[f64]) -> Result<SymmetricEigen, ProblemError> {
        let e = self.eigen(x)?;
        let scale = e.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for (index, w) in e.values.windows(2).enumerate() {
            let gap = w[1] - w[0];
            if gap < DEGENERACY_TOLERANCE * scale {
                return Err(ProblemError::DegenerateEigenvalues { index, gap });
            }
        }
        Ok(e)
    }

    /// `Vᵀ·Aⱼ·V` for every basis matrix.
    fn projected_basis(&self, v: &DenseMatrix<f64>) -> Result<Vec<DenseMatrix<f64>>, ProblemError> {
        let vt = v.adjoint();
        self.basis
            .iter()
            .map(|a| Ok(vt.matmul(&a.matmul(v)?)?))
            .collect()
    }
}

impl Problem for IepProblem {
    type Scalar = f64;

    fn name(&self) -> &str {
        &self.name
    }

    fn num_params(&self) -> usize {
        self.basis.len()
    }

    fn num_residuals(&self) -> usize {
        self.targets.len()
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        let e = self.eigen(x)?;
        Ok(e.values.iter().zip(&self.targets).map(|(l, t)| l - t).collect())
    }

    /// `∂λᵢ/∂xⱼ = vᵢᵀAⱼvᵢ`, valid for simple eigenvalues.
    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        let e = self.simple_eigen(x)?;
        let proj = self.projected_basis(&e.vectors)?;
        Ok(DenseMatrix::from_fn(self.num_residuals(), self.num_params(), |i, j| {
            proj[j][(i, i)]
        }))
    }

    /// `∂²λᵢ/∂xₐ∂x_b = 2·Σ_{k≠i} (vᵢᵀAₐv_k)(v_kᵀA_b vᵢ)/(λᵢ − λ_k)`.
    fn residual_hessians(&self, x: &[f64]) -> Option<Result<Vec<DenseMatrix<f64>>, ProblemError>> {
        let run = || {
            let e = self.simple_eigen(x)?;
            let proj = self.projected_basis(&e.vectors)?;
            let n = self.num_residuals();
            let l = self.num_params();
            Ok((0..n)
                .map(|i| {
                    DenseMatrix::from_fn(l, l, |a, b| {
                        2.0 * (0..n)
                            .filter(|&k| k != i)
                            .map(|k| proj[a][(i, k)] * proj[b][(k, i)] / (e.values[i] - e.values[k]))
                            .sum::<f64>()
                    })
                })
                .collect())
        };
        Some(run())
    }
}

/// Default planted `(B₂⁰, B₄⁰, B₂², B₄⁴)` for the synthetic Mn₁₂ spectrum,
/// chosen so that all 21 levels are well separated.
pub const MN12_PLANTED_DEFAULT: [f64; 4] = [-0.05, -2.6e-5, 0.014, -9.8e-4];

/// Spin-10 IEP whose targets are the spectrum of the Hamiltonian at `planted`.
pub fn mn12_problem(planted: [f64; 4]) -> Result<IepProblem, ProblemError> {
    let ops = stevens_operators(10.0)?;
    let dim = ops.dimension();
    let basis = ops.basis();
    let mut h = DenseMatrix::zeros(dim, dim);
    for (a, &b) in basis.iter().zip(&planted) {
        h = h.add_scaled(b, a)?;
    }
    let targets = symmetric_eigen(&h)?.values;
    IepProblem::new("mn12", basis, DenseMatrix::zeros(dim, dim), targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_one_operators() {
        let ops = stevens_operators(1.0).unwrap();
        assert_eq!(ops.o20.as_slice(), DenseMatrix::diagonal(&[1.0, -2.0, 1.0]).as_slice());
        for o in ops.basis() {
            assert_eq!(o.add_scaled(-1.0, &o.adjoint()).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn o20_is_traceless() {
        for s in [1.0, 1.5, 2.0, 5.5, 10.0] {
            let o = stevens_operators(s).unwrap().o20;
            let tr: f64 = (0..o.rows()).map(|i| o[(i, i)]).sum();
            assert!(tr.abs() < 1e-9, "S = {s}");
        }
    }

    #[test]
    fn invalid_spin_is_rejected() {
        assert!(stevens_operators(1.25).is_err());
        assert!(stevens_operators(0.5).is_err());
    }

    #[test]
    fn diagonal_iep() {
        let p = iep_problem(
            vec![DenseMatrix::diagonal(&[1.0, 0.0])],
            DenseMatrix::zeros(2, 2),
            vec![0.0, 2.0],
        )
        .unwrap();
        assert_eq!(p.residual(&[2.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn planted_spectrum_is_a_root() {
        let p = mn12_problem(MN12_PLANTED_DEFAULT).unwrap();
        let r = p.residual(&MN12_PLANTED_DEFAULT).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-12));
        assert!(p.jacobian(&MN12_PLANTED_DEFAULT).is_ok());
    }
}
