//! The block space `H = ∏ F_q^{k_i}`, its vectors, weights and linear codes.

use std::cmp::Ordering;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{check_bound, Error, Result};
use crate::field::{Field, Matrix};
use crate::poset::{LabelSet, Poset, WeightFunction};
use crate::{Limits, Rational};

/// A vector of `H`, stored flat: coordinate `i` occupies the `k_i` entries
/// starting at its block offset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct CodeVector(Vec<u32>);

impl CodeVector {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl AsRef<[u32]> for CodeVector {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

/// The alphabet: a prime field together with a block dimension `k_i ≥ 1`
/// per coordinate. Coordinates are indexed like the elements of the poset
/// they are paired with.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AmbientSpace {
    field: Field,
    dims: Vec<usize>,
    #[serde(skip)]
    offsets: Vec<usize>,
    #[serde(skip)]
    len: usize,
}

impl AmbientSpace {
    pub fn new(q: u32, dims: Vec<usize>) -> Result<Self> {
        Self::with_field(Field::new(q)?, dims)
    }

    pub fn with_field(field: Field, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Validation("the coordinate set must be nonempty".into()));
        }
        if let Some(pos) = dims.iter().position(|&k| k == 0) {
            return Err(Error::Validation(format!(
                "coordinate {pos} has dimension 0; zero blocks are not supported"
            )));
        }
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &k| {
                let o = *acc;
                *acc += k;
                Some(o)
            })
            .collect();
        let len = dims.iter().sum();
        Ok(AmbientSpace {
            field,
            dims,
            offsets,
            len,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of coordinates `|Ω|`.
    pub fn coordinates(&self) -> usize {
        self.dims.len()
    }

    /// Total length `N = Σ k_i`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Flat positions of coordinate `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.dims[i]
    }

    /// Coordinate owning flat position `t`.
    pub fn coordinate_of(&self, t: usize) -> usize {
        self.offsets.partition_point(|&o| o <= t) - 1
    }

    pub fn check_poset(&self, poset: &Poset) -> Result<()> {
        if poset.len() != self.coordinates() {
            return Err(Error::Validation(format!(
                "space has {} coordinates but the poset has {} elements",
                self.coordinates(),
                poset.len()
            )));
        }
        Ok(())
    }

    pub fn vector_from_flat(&self, data: Vec<u32>) -> Result<CodeVector> {
        if data.len() != self.len {
            return Err(Error::Validation(format!(
                "vector has length {}, expected {}",
                data.len(),
                self.len
            )));
        }
        if let Some(x) = data.iter().find(|&&x| x >= self.q()) {
            return Err(Error::Validation(format!("{x} is not an element of F_{}", self.q())));
        }
        Ok(CodeVector(data))
    }

    pub fn vector_from_blocks(&self, blocks: &[Vec<u32>]) -> Result<CodeVector> {
        if blocks.len() != self.coordinates() || blocks.iter().zip(&self.dims).any(|(b, &k)| b.len() != k) {
            return Err(Error::Validation("block lengths do not match the dimensions".into()));
        }
        self.vector_from_flat(blocks.concat())
    }

    pub fn zero(&self) -> CodeVector {
        CodeVector(vec![0; self.len])
    }

    /// `η_i(a)`: the vector with block `a` at coordinate `i` and zeros
    /// elsewhere.
    pub fn embed(&self, i: usize, block: &[u32]) -> CodeVector {
        let mut v = vec![0; self.len];
        v[self.block_range(i)].copy_from_slice(block);
        CodeVector(v)
    }

    /// `π_i(β)`.
    pub fn block<'a>(&self, v: &'a [u32], i: usize) -> &'a [u32] {
        &v[self.block_range(i)]
    }

    /// `supp(β) = {i : β_i ≠ 0}`.
    pub fn support(&self, v: &[u32]) -> LabelSet {
        LabelSet::from_indices((0..self.coordinates()).filter(|&i| self.block(v, i).iter().any(|&x| x != 0)))
    }

    /// `⟨supp β⟩_P`.
    pub fn p_support(&self, v: &[u32], poset: &Poset) -> LabelSet {
        poset.close(self.support(v))
    }

    /// `wt_(P,ω)(β) = Σ_{i ∈ ⟨supp β⟩} ω(i)`.
    pub fn weight(&self, v: &CodeVector, poset: &Poset, omega: &WeightFunction) -> Rational {
        omega.sum(self.p_support(v.as_slice(), poset))
    }

    /// `wt_P(β) = |⟨supp β⟩|`.
    pub fn p_weight(&self, v: &CodeVector, poset: &Poset) -> usize {
        self.p_support(v.as_slice(), poset).len()
    }

    /// `d(α, β) = wt(β − α)`.
    pub fn distance(&self, a: &CodeVector, b: &CodeVector, poset: &Poset, omega: &WeightFunction) -> Result<Rational> {
        if a.0.len() != self.len || b.0.len() != self.len {
            return Err(Error::Validation("vectors do not belong to this space".into()));
        }
        let diff: Vec<u32> = a.0.iter().zip(&b.0).map(|(&x, &y)| self.field.sub(y, x)).collect();
        Ok(self.weight(&CodeVector(diff), poset, omega))
    }

    pub fn inner_product(&self, a: &[u32], b: &[u32]) -> u32 {
        self.field.dot(a, b)
    }

    /// `|H| = q^N`, if it fits in a `u128`.
    pub fn size(&self) -> u128 {
        (self.q() as u128).checked_pow(self.len as u32).unwrap_or(u128::MAX)
    }

    /// Index of a vector in the lexicographic listing of `H`.
    pub fn index_of(&self, v: &[u32]) -> usize {
        v.iter().fold(0usize, |acc, &x| acc * self.q() as usize + x as usize)
    }

    pub fn vector_at(&self, mut index: usize) -> CodeVector {
        let q = self.q() as usize;
        let mut v = vec![0u32; self.len];
        for slot in v.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
        CodeVector(v)
    }

    /// Every vector of `H` in lexicographic order.
    pub fn all_vectors(&self, limits: &Limits) -> Result<Vec<CodeVector>> {
        check_bound("vectors of H", self.size(), limits.max_vectors)?;
        Ok((0..self.size() as usize).map(|i| self.vector_at(i)).collect())
    }

    /// `δ(I) = {β : supp β ⊆ I}`.
    pub fn delta_subspace(&self, set: LabelSet) -> LinearCode {
        let rows: Vec<Vec<u32>> = set
            .iter()
            .filter(|&i| i < self.coordinates())
            .flat_map(|i| self.block_range(i))
            .map(|t| {
                let mut v = vec![0; self.len];
                v[t] = 1;
                v
            })
            .collect();
        LinearCode::from_generators(self.field, self.len, &rows)
    }

    /// Every subspace of `H`, by dimension and then by RREF generator matrix.
    pub fn enumerate_codes(&self, limits: &Limits) -> Result<Vec<LinearCode>> {
        let total = (0..=self.len).map(|d| gaussian_binomial(self.len, d, self.q())).sum::<u128>();
        check_bound("subspaces of H", total, limits.max_codes)?;
        Ok((0..=self.len).flat_map(|d| codes_of_dimension(self.field, self.len, d)).collect())
    }

    /// Every linear map `C → H`, as images of the RREF basis rows of `C`.
    pub fn hom_enumerate<'a>(
        &'a self,
        code: &'a LinearCode,
        limits: &Limits,
    ) -> Result<impl Iterator<Item = CodeMap> + 'a> {
        let needed = (self.q() as u128).checked_pow((self.len * code.dim()) as u32).unwrap_or(u128::MAX);
        check_bound("linear maps C → H", needed, limits.max_maps)?;
        Ok(Matrix::all(self.field, code.dim(), self.len).map(|images| CodeMap { images }))
    }
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, d: usize, q: u32) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// The `d`-dimensional subspaces of `F_q^n`, in lexicographic RREF order.
pub fn codes_of_dimension(field: Field, n: usize, d: usize) -> Vec<LinearCode> {
    let q = field.order();
    let mut out = Vec::new();
    for pivots in (0..n).combinations(d) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        for mut code in 0..count {
            let mut m = Matrix::zeros(field, d, n);
            for (r, &p) in pivots.iter().enumerate() {
                m.set(r, p, 1);
            }
            for &(r, c) in free.iter().rev() {
                m.set(r, c, (code % q as u64) as u32);
                code /= q as u64;
            }
            out.push(LinearCode { len: n, basis: m });
        }
    }
    out.sort();
    out
}

/// A linear code: a subspace of `F_q^N` held as its RREF generator matrix,
/// which is canonical, so equality of codes is equality of matrices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearCode {
    len: usize,
    basis: Matrix,
}

impl Ord for LinearCode {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len, self.dim(), self.basis.data()).cmp(&(other.len, other.dim(), other.basis.data()))
    }
}

impl PartialOrd for LinearCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl LinearCode {
    pub fn from_generators(field: Field, len: usize, rows: &[Vec<u32>]) -> LinearCode {
        let m = Matrix::from_data(field, rows.len(), len, rows.concat());
        LinearCode {
            len,
            basis: m.rref().0,
        }
    }

    pub fn from_matrix(m: &Matrix) -> LinearCode {
        LinearCode {
            len: m.cols(),
            basis: m.rref().0,
        }
    }

    pub fn zero(field: Field, len: usize) -> LinearCode {
        LinearCode {
            len,
            basis: Matrix::zeros(field, 0, len),
        }
    }

    pub fn full(field: Field, len: usize) -> LinearCode {
        LinearCode {
            len,
            basis: Matrix::identity(field, len),
        }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u32]> {
        self.basis.row_iter()
    }

    /// Pivot column of each basis row; the coefficient of row `t` in a
    /// codeword is its entry at `pivots()[t]`.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    pub fn size(&self) -> u128 {
        (self.field().order() as u128).pow(self.dim() as u32)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let pivots = self.pivots();
        let coeffs: Vec<u32> = pivots.iter().map(|&p| v[p]).collect();
        self.basis.vec_mul(&coeffs) == v
    }

    /// Codeword with the given coordinates in the RREF basis.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        self.basis.vec_mul(coeffs)
    }

    /// All codewords, ordered by coefficient vector.
    pub fn codewords(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let f = self.field();
        Matrix::all(f, 1, self.dim()).map(move |c| self.combine(c.data()))
    }

    /// `C^⊥` under `⟨α, β⟩ = Σ α_t β_t`.
    pub fn dual(&self) -> LinearCode {
        if self.dim() == 0 {
            return LinearCode::full(self.field(), self.len);
        }
        LinearCode {
            len: self.len,
            basis: self.basis.right_kernel(),
        }
    }

    pub fn sum(&self, other: &LinearCode) -> LinearCode {
        let rows: Vec<Vec<u32>> = self.basis_rows().chain(other.basis_rows()).map(<[u32]>::to_vec).collect();
        LinearCode::from_generators(self.field(), self.len, &rows)
    }

    pub fn intersection(&self, other: &LinearCode) -> LinearCode {
        self.dual().sum(&other.dual()).dual()
    }

    pub fn is_subspace_of(&self, other: &LinearCode) -> bool {
        self.basis_rows().all(|r| other.contains(r))
    }

    /// Image of the code under a square matrix acting on column vectors.
    pub fn image(&self, m: &Matrix) -> LinearCode {
        let rows: Vec<Vec<u32>> = self.basis_rows().map(|r| m.mul_vec(r)).collect();
        LinearCode::from_generators(self.field(), self.len, &rows)
    }

    /// Support of the code: coordinates on which some codeword is nonzero.
    pub fn support(&self, space: &AmbientSpace) -> LabelSet {
        self.basis_rows().fold(LabelSet::EMPTY, |acc, r| acc.union(space.support(r)))
    }
}

/// A linear map from a code into `H`, given by the images of the code's
/// RREF basis rows (row `t` of `images` is the image of basis row `t`).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct CodeMap {
    pub images: Matrix,
}

impl CodeMap {
    pub fn identity(code: &LinearCode) -> Self {
        CodeMap {
            images: code.basis().clone(),
        }
    }

    pub fn from_images(code: &LinearCode, images: &[Vec<u32>]) -> Result<Self> {
        if images.len() != code.dim() {
            return Err(Error::Validation(format!(
                "{} images given for a code of dimension {}",
                images.len(),
                code.dim()
            )));
        }
        Ok(CodeMap {
            images: Matrix::from_rows(code.field(), code.len(), images)?,
        })
    }

    /// `f(c)` for a codeword `c` of `code`.
    pub fn apply(&self, code: &LinearCode, c: &[u32]) -> Vec<u32> {
        let coeffs: Vec<u32> = code.pivots().iter().map(|&p| c[p]).collect();
        self.images.vec_mul(&coeffs)
    }

    /// Whether `f` is injective on its code.
    pub fn is_injective(&self) -> bool {
        self.images.rank() == self.images.rows()
    }
}
