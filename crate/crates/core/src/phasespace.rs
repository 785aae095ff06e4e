//! Covariance-matrix algebra for zero-mean n-mode Gaussian states.
//!
//! Quadratures are ordered `(X1, P1, ..., Xn, Pn)` and the vacuum has the
//! identity as covariance matrix.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Slack on the uncertainty relation `nu >= 1`.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Relative tolerance on `S Omega S^T = Omega`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Block-diagonal symplectic form with 2x2 blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> Result<DMatrix<f64>> {
    if n_modes == 0 {
        return Err(Error::InvalidDimension("symplectic form needs at least one mode".into()));
    }
    Ok(omega(n_modes))
}

fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for i in 0..n_modes {
        om[(2 * i, 2 * i + 1)] = 1.0;
        om[(2 * i + 1, 2 * i)] = -1.0;
    }
    om
}

fn check_square_even(data: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = data.shape();
    if r != c {
        return Err(Error::InvalidDimension(format!("matrix is {r}x{c}, expected square")));
    }
    if r == 0 || r % 2 != 0 {
        return Err(Error::InvalidDimension(format!("matrix size {r} is not a positive even number")));
    }
    if let Some(bad) = data.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("matrix entry {bad}")));
    }
    Ok(r / 2)
}

fn symmetrized(data: &DMatrix<f64>) -> DMatrix<f64> {
    (data + data.transpose()) * 0.5
}

/// Symplectic spectrum of an arbitrary symmetric positive-definite matrix,
/// sorted in descending order.
///
/// The eigenvalues of `Omega M` come in pairs `+-i nu`; equivalently `nu^2`
/// are the (doubly degenerate) eigenvalues of the symmetric matrix
/// `M^{1/2} Omega^T M Omega M^{1/2}`, which keeps the computation real.
pub fn symplectic_spectrum(data: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = check_square_even(data)?;
    let m = symmetrized(data);
    let eig = SymmetricEigen::new(m.clone());
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::Unphysical(format!(
            "matrix is not positive definite (min eigenvalue {min_eig:e})"
        )));
    }
    let root_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * root_diag * eig.eigenvectors.transpose();
    let om = omega(n);
    let inner = om.transpose() * &m * &om;
    let sym = symmetrized(&(&root * inner * &root));
    let mut squares: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    squares.sort_by(|a, b| b.total_cmp(a));
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Covariance matrix of an n-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Symmetrizes `data` and checks the uncertainty relation.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let n_modes = check_square_even(&data)?;
        let data = symmetrized(&data);
        let spectrum = symplectic_spectrum(&data)?;
        let smallest = spectrum.last().copied().unwrap_or(1.0);
        if smallest < 1.0 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {smallest} < 1"
            )));
        }
        Ok(Self { n_modes, data })
    }

    pub fn from_row_slice(n_modes: usize, entries: &[f64]) -> Result<Self> {
        let dim = 2 * n_modes;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("vacuum needs at least one mode".into()));
        }
        Ok(Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Single-mode thermal state `nu * I2`.
    pub fn thermal(nu: f64) -> Result<Self> {
        if !(nu >= 1.0) || !nu.is_finite() {
            return Err(Error::param("nu", nu, "thermal occupation must satisfy nu >= 1"));
        }
        Ok(Self {
            n_modes: 1,
            data: DMatrix::identity(2, 2) * nu,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    pub fn det(&self) -> f64 {
        self.data.determinant()
    }

    /// 2x2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> [[f64; 2]; 2] {
        let d = &self.data;
        [
            [d[(2 * i, 2 * j)], d[(2 * i, 2 * j + 1)]],
            [d[(2 * i + 1, 2 * j)], d[(2 * i + 1, 2 * j + 1)]],
        ]
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&self.data)
    }

    /// True when `det = 1` within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.det() - 1.0).abs() <= tol
    }
}

/// Real linear map on phase space preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let n_modes = check_square_even(&data)?;
        let om = omega(n_modes);
        let deviation = (&data * &om * data.transpose() - &om).amax();
        let scale = data.amax().powi(2).max(1.0);
        if deviation > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self { n_modes, data })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("identity needs at least one mode".into()));
        }
        Ok(Self {
            n_modes,
            data: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Relabels modes: output mode `i` is input mode `order[i]`.
    pub fn mode_permutation(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &m in order {
            if m >= n || seen[m] {
                return Err(Error::InvalidPartition(format!("{order:?} is not a permutation")));
            }
            seen[m] = true;
        }
        if n == 0 {
            return Err(Error::InvalidDimension("empty permutation".into()));
        }
        let mut data = DMatrix::zeros(2 * n, 2 * n);
        for (i, &src) in order.iter().enumerate() {
            data[(2 * i, 2 * src)] = 1.0;
            data[(2 * i + 1, 2 * src + 1)] = 1.0;
        }
        Ok(Self { n_modes: n, data })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn direct_sum(&self, other: &SymplecticTransform) -> SymplecticTransform {
        SymplecticTransform {
            n_modes: self.n_modes + other.n_modes,
            data: block_diag(&self.data, &other.data),
        }
    }

    pub fn compose(&self, then: &SymplecticTransform) -> Result<SymplecticTransform> {
        if self.n_modes != then.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                got: then.n_modes,
            });
        }
        Ok(SymplecticTransform {
            n_modes: self.n_modes,
            data: &then.data * &self.data,
        })
    }
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}

/// Side A of a bipartition of an n-mode system; side B is the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    n_modes: usize,
    party: Vec<usize>,
}

impl ModePartition {
    pub fn new(n_modes: usize, party: Vec<usize>) -> Result<Self> {
        if party.is_empty() {
            return Err(Error::InvalidPartition("party has no modes".into()));
        }
        let mut seen = vec![false; n_modes];
        for &m in &party {
            if m >= n_modes {
                return Err(Error::InvalidPartition(format!(
                    "mode {m} out of range for {n_modes} modes"
                )));
            }
            if seen[m] {
                return Err(Error::InvalidPartition(format!("mode {m} listed twice")));
            }
            seen[m] = true;
        }
        Ok(Self { n_modes, party })
    }

    pub fn single(n_modes: usize, mode: usize) -> Result<Self> {
        Self::new(n_modes, vec![mode])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn party(&self) -> &[usize] {
        &self.party
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_modes).filter(|m| !self.party.contains(m)).collect()
    }

    pub fn is_strict(&self) -> bool {
        self.party.len() < self.n_modes
    }
}

/// Congruence `S cm S^T`.
pub fn apply(s: &SymplecticTransform, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if s.n_modes != cm.n_modes {
        return Err(Error::DimensionMismatch {
            expected: cm.n_modes,
            got: s.n_modes,
        });
    }
    CovarianceMatrix::new(&s.data * &cm.data * s.data.transpose())
}

pub fn direct_sum(a: &CovarianceMatrix, b: &CovarianceMatrix) -> CovarianceMatrix {
    CovarianceMatrix {
        n_modes: a.n_modes + b.n_modes,
        data: block_diag(&a.data, &b.data),
    }
}

/// Reduced state on `keep`, in the listed order.
pub fn partial_trace(cm: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    let part = ModePartition::new(cm.n_modes, keep.to_vec())?;
    let idx: Vec<usize> = part.party.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let dim = idx.len();
    let data = DMatrix::from_fn(dim, dim, |i, j| cm.data[(idx[i], idx[j])]);
    Ok(CovarianceMatrix {
        n_modes: keep.len(),
        data,
    })
}

/// Result of transposing one party: a symmetric matrix that need not be a
/// physical covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTranspose {
    data: DMatrix<f64>,
}

impl PartialTranspose {
    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&self.data)
    }

    pub fn smallest_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(*self.symplectic_eigenvalues()?.last().expect("at least one mode"))
    }
}

/// Flips the sign of the momentum quadratures of `party`.
pub fn partial_transpose(cm: &CovarianceMatrix, party: &ModePartition) -> Result<PartialTranspose> {
    if party.n_modes != cm.n_modes {
        return Err(Error::DimensionMismatch {
            expected: cm.n_modes,
            got: party.n_modes,
        });
    }
    if !party.is_strict() {
        return Err(Error::InvalidPartition("party must be a strict subset of the modes".into()));
    }
    let mut data = cm.data.clone();
    for &m in &party.party {
        let p = 2 * m + 1;
        data.row_mut(p).neg_mut();
        data.column_mut(p).neg_mut();
    }
    Ok(PartialTranspose { data })
}

/// Renyi-2 entropy `1/2 ln det cm` in nats.
pub fn renyi2_entropy(cm: &CovarianceMatrix) -> Result<f64> {
    let det = cm.det();
    if det < 1.0 - PHYSICALITY_TOL {
        return Err(Error::Unphysical(format!("det = {det} < 1")));
    }
    Ok(0.5 * det.max(1.0).ln())
}
