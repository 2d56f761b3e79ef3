use num::{One, Zero};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Q};

/// Linear subspace `V` of `R^m` given by rational spanning vectors.
///
/// Construction computes the orthogonal projection `B (B^T B)^{-1} B^T`, a
/// rational basis of the orthogonal complement, and a canonical orthogonal
/// coordinate frame used to read polynomials on `V` in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    projection: Matrix,
    complement: Vec<Vec<Q>>,
    frame: Vec<Vec<Q>>,
    coordinate_forms: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn new(ambient: usize, basis: Vec<Vec<Q>>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
        }
        if linalg::rank_of(&basis) != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        let kappa = basis.len();
        let projection = if kappa == 0 {
            Matrix::zeros(ambient, ambient)
        } else {
            let b = Matrix::from_columns(&basis, ambient);
            let bt = b.transpose();
            let gram_inv = bt.mul(&b).inverse().ok_or(Error::LinearlyDependent)?;
            b.mul(&gram_inv).mul(&bt)
        };
        let complement: Vec<Vec<Q>> = if kappa == 0 {
            (0..ambient).map(|i| unit(ambient, i)).collect()
        } else {
            Matrix::from_rows(&basis).nullspace().iter().map(|v| rational::primitive_integer_vector(v)).collect()
        };
        let frame = canonical_frame(&projection, kappa);
        let coordinate_forms = coordinate_forms(&frame);
        Ok(Subspace { ambient, basis, projection, complement, frame, coordinate_forms })
    }

    /// Integer shorthand.
    pub fn from_int_basis(basis: &[&[i64]]) -> Result<Self> {
        let ambient = basis.first().map_or(0, |v| v.len());
        Self::new(ambient, basis.iter().map(|v| v.iter().map(|&x| rational::q(x)).collect()).collect())
    }

    /// `span(e_{i+1})` in `R^m`.
    pub fn axis(ambient: usize, i: usize) -> Self {
        Self::new(ambient, vec![unit(ambient, i)]).expect("unit vector spans a line")
    }

    /// The subspace `{x : a_k . x = 0 for all k}`.
    pub fn from_normals(ambient: usize, normals: &[Vec<Q>]) -> Result<Self> {
        if normals.is_empty() {
            return Self::new(ambient, (0..ambient).map(|i| unit(ambient, i)).collect());
        }
        if linalg::rank_of(normals) != normals.len() {
            return Err(Error::LinearlyDependent);
        }
        let basis = Matrix::from_rows(normals).nullspace();
        Self::new(ambient, basis)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// Basis of `V^perp` as primitive integer vectors.
    pub fn complement(&self) -> &[Vec<Q>] {
        &self.complement
    }

    /// Canonical frame: the first independent columns of the projection,
    /// Gram-Schmidt reduced and scaled to primitive integer vectors.
    pub fn frame(&self) -> &[Vec<Q>] {
        &self.frame
    }

    /// Rows `l_i` with `l_i . x` the i-th frame coordinate of `pi_V(x)`.
    pub fn coordinate_forms(&self) -> &[Vec<Q>] {
        &self.coordinate_forms
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        v.len() == self.ambient && self.projection.mul_vec(v) == v
    }

    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        self.projection.mul_vec(x)
    }

    /// Frame coordinates of `pi_V(x)`.
    pub fn coordinates(&self, x: &[Q]) -> Vec<Q> {
        self.coordinate_forms.iter().map(|l| rational::dot(l, x)).collect()
    }

    pub fn coordinate_matrix_f64(&self) -> Vec<Vec<f64>> {
        self.coordinate_forms.iter().map(|l| l.iter().map(rational::to_f64).collect()).collect()
    }

    /// `p o pi_V` in ambient coordinates using the canonical frame.
    pub fn pullback(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), found: p.dimension() });
        }
        substitute_forms(p, &self.coordinate_forms, self.ambient)
    }
}

fn unit(m: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); m];
    v[i] = Q::one();
    v
}

fn canonical_frame(projection: &Matrix, kappa: usize) -> Vec<Vec<Q>> {
    let mut frame: Vec<Vec<Q>> = Vec::with_capacity(kappa);
    for j in 0..projection.cols() {
        if frame.len() == kappa {
            break;
        }
        let mut v = projection.column(j);
        for u in &frame {
            let c = rational::dot(&v, u) / rational::dot(u, u);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= &c * ui;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            frame.push(rational::primitive_integer_vector(&v));
        }
    }
    frame
}

/// Rows of `(F^T F)^{-1} F^T` for a frame `F` with independent columns.
fn coordinate_forms(frame: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if frame.is_empty() {
        return Vec::new();
    }
    let m = frame[0].len();
    let f = Matrix::from_columns(frame, m);
    let ft = f.transpose();
    let gram_inv = ft.mul(&f).inverse().expect("frame vectors are independent");
    let forms = gram_inv.mul(&ft);
    (0..forms.rows()).map(|i| forms.row(i).to_vec()).collect()
}

fn substitute_forms(p: &Polynomial, forms: &[Vec<Q>], ambient: usize) -> Result<Polynomial> {
    if forms.is_empty() {
        // Polynomials on the zero subspace are constants.
        let c = p.coefficient(&super::Monomial::one(0));
        return Ok(Polynomial::constant(ambient, c));
    }
    let vars: Vec<Polynomial> = forms.iter().map(|l| Polynomial::linear_form(l)).collect();
    p.substitute(&vars)
}

/// `p o pi_V` where `p` is read in the coordinates of an explicit frame of `V`.
///
/// The frame need not be orthogonal: the coordinates of `pi_V(x)` are
/// `(F^T F)^{-1} F^T x`.
pub fn pullback(p: &Polynomial, v: &Subspace, frame: &[Vec<Q>]) -> Result<Polynomial> {
    if p.dimension() != v.dimension() {
        return Err(Error::DimensionMismatch { expected: v.dimension(), found: p.dimension() });
    }
    if frame.len() != v.dimension() {
        return Err(Error::DimensionMismatch { expected: v.dimension(), found: frame.len() });
    }
    for (index, f) in frame.iter().enumerate() {
        if !v.contains(f) {
            return Err(Error::FrameOutsideSubspace { index });
        }
    }
    if linalg::rank_of(frame) != frame.len() {
        return Err(Error::LinearlyDependent);
    }
    substitute_forms(p, &coordinate_forms(frame), v.ambient())
}

/// Ordered family of subspaces sharing ambient dimension and dimension `kappa`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    ambient: usize,
    kappa: usize,
    subspaces: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(ambient: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        let kappa = subspaces.first().map_or(0, Subspace::dimension);
        if subspaces.iter().any(|s| s.ambient() != ambient || s.dimension() != kappa) {
            return Err(Error::InconsistentFamily);
        }
        Ok(SubspaceFamily { ambient, kappa, subspaces })
    }

    pub fn empty(ambient: usize) -> Self {
        SubspaceFamily { ambient, kappa: 0, subspaces: Vec::new() }
    }

    /// The coordinate axes `span(e_1), ..., span(e_m)`.
    pub fn axes(ambient: usize) -> Self {
        Self::new(ambient, (0..ambient).map(|i| Subspace::axis(ambient, i)).collect()).expect("axes are consistent")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn get(&self, j: usize) -> &Subspace {
        &self.subspaces[j]
    }

    /// Every nonempty subcollection of `k` members spans dimension `min(k kappa, m)`.
    pub fn general_position(&self) -> Result<bool> {
        let n = self.subspaces.len();
        if n > 20 {
            return Err(Error::FamilyTooLarge(n));
        }
        for mask in 1u32..(1u32 << n) {
            let k = mask.count_ones() as usize;
            let vectors: Vec<Vec<Q>> = (0..n)
                .filter(|j| mask & (1 << j) != 0)
                .flat_map(|j| self.subspaces[j].basis().iter().cloned())
                .collect();
            if linalg::rank_of(&vectors) != (k * self.kappa).min(self.ambient) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
