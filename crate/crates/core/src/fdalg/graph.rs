//! Finite quantum graphs `(B, ψ, d)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AlgebraSpec, FdAlgError};
use crate::scalar::rational_to_f64;

pub const DEFAULT_GRAPH_TOL: f64 = 1e-9;

/// `d` acting on `B`, stored in the orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGraph {
    algebra: AlgebraSpec,
    d: DMatrix<f64>,
    normal_defect: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProjection {
    pub eigenvalue: Complex64,
    pub projection: DMatrix<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphReport {
    /// `d ∈ span{id, ηη*}`.
    pub trivial: bool,
    /// Frobenius norm of the residual of the best fit in that span.
    pub trivial_residual: f64,
    pub normal: bool,
    /// Empty when `d` is not normal.
    pub spectral_projections: Vec<SpectralProjection>,
    /// Worst of `|Σp - id|`, `|p_i p_j - δ_ij p_i|`, `|Σλp - d|`.
    pub projection_defect: f64,
}

fn sqrt_weights(a: &AlgebraSpec) -> Vec<f64> {
    a.basis().iter().map(|b| rational_to_f64(a.weight(b.block, b.col)).sqrt()).collect()
}

impl QuantumGraph {
    /// `d` already in orthonormal coordinates.
    pub fn new(algebra: AlgebraSpec, d: DMatrix<f64>) -> Result<Self, FdAlgError> {
        if d.nrows() != d.ncols() {
            return Err(FdAlgError::NotSquare { rows: d.nrows(), cols: d.ncols() });
        }
        if d.nrows() != algebra.dim() {
            return Err(FdAlgError::DimensionMismatch { expected: algebra.dim(), got: d.nrows() });
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(FdAlgError::Operator(crate::operator::OperatorError::NonFinite));
        }
        let dt = d.transpose();
        let normal_defect = (&d * &dt - &dt * &d).abs().max();
        Ok(Self { algebra, d, normal_defect })
    }

    /// `d` given row-major in the matrix-unit basis `e_ij^T`; converted by
    /// conjugating with `diag(Q_j^{1/2})`.
    pub fn from_matrix_units(algebra: AlgebraSpec, rows: &[Vec<f64>]) -> Result<Self, FdAlgError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(FdAlgError::NotSquare { rows: n, cols: bad.len() });
        }
        let s = sqrt_weights(&algebra);
        if n != s.len() {
            return Err(FdAlgError::DimensionMismatch { expected: s.len(), got: n });
        }
        let d = DMatrix::from_fn(n, n, |i, j| s[i] * rows[i][j] / s[j]);
        Self::new(algebra, d)
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    /// `d` back in the matrix-unit basis.
    pub fn d_matrix_units(&self) -> DMatrix<f64> {
        let s = sqrt_weights(&self.algebra);
        DMatrix::from_fn(self.d.nrows(), self.d.ncols(), |i, j| self.d[(i, j)] * s[j] / s[i])
    }

    pub fn normal_defect(&self) -> f64 {
        self.normal_defect
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        self.normal_defect <= tol * self.d.norm().max(1.0).powi(2)
    }
}

/// `ℂⁿ` with the uniform state and `d` the adjacency matrix.
pub fn from_classical_graph(adjacency: &[Vec<u8>]) -> Result<QuantumGraph, FdAlgError> {
    let n = adjacency.len();
    for (i, row) in adjacency.iter().enumerate() {
        if row.len() != n {
            return Err(FdAlgError::NotSquare { rows: n, cols: row.len() });
        }
        if let Some(j) = row.iter().position(|&x| x > 1) {
            return Err(FdAlgError::NotAdjacency(i, j));
        }
    }
    if n == 0 {
        return Err(FdAlgError::NoBlocks);
    }
    let rows: Vec<Vec<f64>> = adjacency.iter().map(|r| r.iter().map(|&x| f64::from(x)).collect()).collect();
    QuantumGraph::from_matrix_units(AlgebraSpec::uniform_commutative(n), &rows)
}

/// Triviality test and, for normal `d`, the spectral decomposition.
pub fn analyze_graph(g: &QuantumGraph, tol: f64) -> Result<GraphReport, FdAlgError> {
    let (trivial_residual, trivial) = triviality(g, tol);
    let normal = g.is_normal(tol);
    let (spectral_projections, projection_defect) =
        if normal { spectral_decomposition(g.d()) } else { (Vec::new(), f64::NAN) };
    Ok(GraphReport { trivial, trivial_residual, normal, spectral_projections, projection_defect })
}

/// Spectral projections only; refuses non-normal `d`.
pub fn spectral_projections(g: &QuantumGraph, tol: f64) -> Result<Vec<SpectralProjection>, FdAlgError> {
    if !g.is_normal(tol) {
        return Err(FdAlgError::NotNormal(g.normal_defect()));
    }
    Ok(spectral_decomposition(g.d()).0)
}

/// Least-squares fit of `d` onto `span{I, vvᵀ}` with `v = η(1)`.
fn triviality(g: &QuantumGraph, tol: f64) -> (f64, bool) {
    let a = g.algebra();
    let n = a.dim();
    let v: Vec<f64> = a.unit_coordinates();
    let vvt = DMatrix::from_fn(n, n, |i, j| v[i] * v[j]);
    let id = DMatrix::<f64>::identity(n, n);
    let d = g.d();
    let (gii, giv, gvv) = (id.dot(&id), id.dot(&vvt), vvt.dot(&vvt));
    let (bi, bv) = (id.dot(d), vvt.dot(d));
    let det = gii * gvv - giv * giv;
    let fit = if det.abs() > 1e-12 * gii * gvv {
        let x = (gvv * bi - giv * bv) / det;
        let y = (gii * bv - giv * bi) / det;
        &id * x + &vvt * y
    } else {
        &id * (bi / gii)
    };
    let residual = (d - fit).norm();
    (residual, residual <= tol * d.norm().max(1.0))
}

fn spectral_decomposition(d: &DMatrix<f64>) -> (Vec<SpectralProjection>, f64) {
    let n = d.nrows();
    let dc: DMatrix<Complex64> = d.map(|x| Complex64::new(x, 0.0));
    // For normal d the Hermitian parts H = (d + d*)/2 and K = (d - d*)/2i commute,
    // so a generic combination H + tK has the joint eigenvectors.
    let dt = dc.adjoint();
    let h = (&dc + &dt) * Complex64::new(0.5, 0.0);
    let k = (&dc - &dt) * Complex64::new(0.0, -0.5);
    let t = Complex64::new(0.754_877_666_246_692_8, 0.0);
    let q = (h + k * t).symmetric_eigen().eigenvectors;
    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<Complex64> = (0..n)
        .map(|i| {
            let v = q.column(i);
            (v.adjoint() * &dc * v)[(0, 0)]
        })
        .collect();
    order.sort_by(|&i, &j| eig[i].re.partial_cmp(&eig[j].re).unwrap().then(eig[i].im.partial_cmp(&eig[j].im).unwrap()));
    let cluster = 1e-6 * d.norm().max(1.0);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.iter_mut().find(|g| (eig[g[0]] - eig[i]).norm() <= cluster) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let projections: Vec<SpectralProjection> = groups
        .iter()
        .map(|g| {
            let mut p = DMatrix::<Complex64>::zeros(n, n);
            for &i in g {
                let col = q.column(i);
                p += col * col.adjoint();
            }
            let mean = g.iter().map(|&i| eig[i]).sum::<Complex64>() / g.len() as f64;
            SpectralProjection { eigenvalue: mean, projection: p }
        })
        .collect();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut sum = DMatrix::<Complex64>::zeros(n, n);
    let mut recon = DMatrix::<Complex64>::zeros(n, n);
    let mut defect: f64 = 0.0;
    for (i, pi) in projections.iter().enumerate() {
        sum += &pi.projection;
        recon += &pi.projection * pi.eigenvalue;
        for (j, pj) in projections.iter().enumerate() {
            let mut prod = &pi.projection * &pj.projection;
            if i == j {
                prod -= &pi.projection;
            }
            defect = defect.max(max_abs(&prod));
        }
    }
    defect = defect.max(max_abs(&(sum - id))).max(max_abs(&(recon - dc)));
    (projections, defect)
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Vec<Vec<u8>> {
        vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]
    }

    #[test]
    fn classical_graphs() {
        let c4 =
            from_classical_graph(&[vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0]]).unwrap();
        assert_eq!(c4.algebra().delta(), Some(&crate::fdalg::rat(4, 1)));
        assert_eq!(c4.d()[(0, 1)], 1.0);
        assert_eq!(c4.d()[(0, 2)], 0.0);
        let empty = from_classical_graph(&vec![vec![0; 3]; 3]).unwrap();
        assert_eq!(empty.d().norm(), 0.0);
        let k4: Vec<Vec<u8>> = (0..4).map(|i| (0..4).map(|j| u8::from(i != j)).collect()).collect();
        let g = from_classical_graph(&k4).unwrap();
        let report = analyze_graph(&g, DEFAULT_GRAPH_TOL).unwrap();
        // J - I = 4ηη* - id on ℂ⁴.
        assert!(report.trivial);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(from_classical_graph(&[vec![0, 1]]), Err(FdAlgError::NotSquare { .. })));
        assert!(matches!(from_classical_graph(&[vec![2]]), Err(FdAlgError::NotAdjacency(0, 0))));
        let a = AlgebraSpec::uniform_commutative(2);
        assert!(matches!(
            QuantumGraph::from_matrix_units(a, &[vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]]),
            Err(FdAlgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_and_unit_projection_are_trivial() {
        let a = AlgebraSpec::normalized_matrix(2);
        let id = QuantumGraph::new(a.clone(), DMatrix::identity(4, 4)).unwrap();
        assert!(analyze_graph(&id, DEFAULT_GRAPH_TOL).unwrap().trivial);
        let v: Vec<f64> = a.unit_coordinates();
        let eta = DMatrix::from_fn(4, 4, |i, j| v[i] * v[j]);
        let g = QuantumGraph::new(a, eta).unwrap();
        let r = analyze_graph(&g, DEFAULT_GRAPH_TOL).unwrap();
        assert!(r.trivial && r.normal);
        assert_eq!(r.spectral_projections.len(), 2);
    }

    #[test]
    fn path_graph_spectrum() {
        let g = from_classical_graph(&path3()).unwrap();
        let r = analyze_graph(&g, DEFAULT_GRAPH_TOL).unwrap();
        assert!(!r.trivial);
        assert_eq!(r.spectral_projections.len(), 3);
        let mut ev: Vec<f64> = r.spectral_projections.iter().map(|p| p.eigenvalue.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s2 = 2f64.sqrt();
        for (got, want) in ev.iter().zip([-s2, 0.0, s2]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!(r.projection_defect < 1e-9);
        // Oracle: the 0-eigenvector of P₃ is (1,0,-1)/√2.
        let p0 = &r.spectral_projections[1].projection;
        assert!((p0[(0, 0)].re - 0.5).abs() < 1e-9 && (p0[(0, 2)].re + 0.5).abs() < 1e-9);
    }

    #[test]
    fn non_normal_refused() {
        let a = AlgebraSpec::uniform_commutative(2);
        let g = QuantumGraph::new(a, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(spectral_projections(&g, DEFAULT_GRAPH_TOL), Err(FdAlgError::NotNormal(_))));
        let r = analyze_graph(&g, DEFAULT_GRAPH_TOL).unwrap();
        assert!(!r.normal && r.spectral_projections.is_empty());
    }

    #[test]
    fn basis_change_round_trips() {
        let a = AlgebraSpec::new(
            vec![crate::fdalg::MatrixBlock::new(2, vec![crate::fdalg::rat(1, 4), crate::fdalg::rat(3, 4)])],
            false,
        )
        .unwrap();
        let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| (i * 4 + j) as f64).collect()).collect();
        let g = QuantumGraph::from_matrix_units(a, &rows).unwrap();
        let back = g.d_matrix_units();
        for i in 0..4 {
            for j in 0..4 {
                assert!((back[(i, j)] - rows[i][j]).abs() < 1e-12);
            }
        }
    }
}
