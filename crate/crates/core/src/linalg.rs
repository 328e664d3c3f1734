//! Exact linear algebra over the rationals and prime fields.
//!
//! Matrices act on column vectors: a `rows x cols` matrix maps a vector of
//! length `cols` to one of length `rows`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds `GF(p)`, rejecting non-primes.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::Usage(format!("{p} is not a prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::F { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::F { v: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// Maps a rational number into the field; fails if the denominator
    /// vanishes in the field.
    pub fn rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = (q.numer() % &pb + &pb) % &pb;
                let den = (q.denom() % &pb + &pb) % &pb;
                if den.is_zero() {
                    return Err(Error::Usage(format!("{q} is undefined modulo {p}")));
                }
                let n = Scalar::F { v: num.to_u64().unwrap_or(0), p };
                let d = Scalar::F { v: den.to_u64().unwrap_or(1), p };
                Ok(&n * &d.inv())
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F { v: u64, p: u64 },
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::F { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::F { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::F { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::F { v, p } => Scalar::F { v: powmod(*v, p - 2, *p), p: *p },
        }
    }

    /// The rational value, for `Q` elements, or the canonical integer
    /// representative in `0..p`.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Q(q) => q.clone(),
            Scalar::F { v, .. } => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::F { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::F { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F { v: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p },
            _ => panic!("mixed fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::F { v, p } => Scalar::F { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F { v: mulmod(*a, *b, *p), p: *p },
            _ => panic!("mixed fields"),
        }
    }
}

/// A dense matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: r, cols: c, data }
    }

    /// Builds a matrix from small integers, convenient in tests.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect())
    }

    /// Builds a `len x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(field: Field, len: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    m.data[idx] = &m.data[idx] + &(a * b);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut s = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = &s + &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "dimension mismatch in sum");
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.scale(&self.field.int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Places `o` to the right of `self`.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "row mismatch in hstack");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + o.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, o);
        m
    }

    /// Places `o` below `self`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Copies `o` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, o: &Matrix) {
        for i in 0..o.rows {
            for j in 0..o.cols {
                self.set(r + i, c + j, o.get(i, j).clone());
            }
        }
    }

    /// The submatrix on the given row and column ranges.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Gauss-Jordan elimination.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let y = m.get(r, j);
                    if y.is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &(&f * y);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Rank and a basis of the null space.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let e = self.echelon();
        let basis = kernel_from_echelon(&e, self.cols, self.field);
        (e.pivots.len(), basis)
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.rank_kernel().1
    }

    /// Kernel basis as the columns of a `cols x k` matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_cols(self.field, self.cols, &self.kernel())
    }

    /// Solves `self * x = b`. Returns `None` when inconsistent, otherwise a
    /// particular solution and a kernel basis.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<(Vec<Scalar>, Vec<Vec<Scalar>>)>> {
        if b.len() != self.rows {
            return Err(Error::Usage(format!("right-hand side has length {} but the matrix has {} rows", b.len(), self.rows)));
        }
        let aug = self.hstack(&Matrix::from_cols(self.field, self.rows, &[b.to_vec()]));
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in e.pivots.iter().enumerate() {
            x[c] = e.rref.get(r, self.cols).clone();
        }
        let (_, k) = self.rank_kernel();
        Ok(Some((x, k)))
    }

    /// Solves `self * X = b` column by column; `None` if any column is
    /// inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows, "dimension mismatch in solve");
        let aug = self.hstack(b);
        let e = aug.echelon();
        if e.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &c) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, e.rref.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// A basis of the column space, as columns of a matrix.
    pub fn column_basis(&self) -> Matrix {
        let e = self.echelon();
        self.select_cols(&e.pivots)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.field, self.rows)).filter(|_| self.rank() == self.rows)
    }
}

fn kernel_from_echelon(e: &Echelon, cols: usize, field: Field) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); cols];
        v[f] = field.one();
        for (r, &p) in e.pivots.iter().enumerate() {
            v[p] = -e.rref.get(r, f);
        }
        basis.push(v);
    }
    basis
}

/// Rank and kernel basis of `m`.
pub fn rank_kernel(m: &Matrix) -> (usize, Vec<Vec<Scalar>>) {
    m.rank_kernel()
}

/// Solves `a * x = b`; see [`Matrix::solve`].
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<(Vec<Scalar>, Vec<Vec<Scalar>>)>> {
    a.solve(b)
}

/// Quotient of the ambient space by the span of `subspace` (given as
/// columns of an `ambient x k` matrix).
///
/// Returns `(projection, section)` with `projection * section = 1` and
/// `ker(projection) = span(subspace)`. The section picks standard basis
/// vectors complementary to the subspace.
pub fn quotient_basis(subspace: &Matrix, ambient: usize) -> (Matrix, Matrix) {
    let field = subspace.field();
    assert_eq!(subspace.rows(), ambient, "subspace vectors live in the ambient space");
    let basis = subspace.column_basis();
    let e = basis.transpose().echelon();
    let mut covered = vec![false; ambient];
    for &p in &e.pivots {
        covered[p] = true;
    }
    let free: Vec<usize> = (0..ambient).filter(|&i| !covered[i]).collect();
    let section = Matrix::identity(field, ambient).select_cols(&free);
    let full = basis.hstack(&section);
    let inv = full.inverse().expect("complement spans the quotient");
    let k = basis.cols();
    let projection = inv.block(k, ambient, 0, ambient);
    (projection, section)
}

/// Vector helpers.
pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * c).collect()
}

/// Basis of the intersection of two column spaces in the same ambient space.
pub fn intersect(a: &Matrix, b: &Matrix) -> Matrix {
    let field = a.field();
    let n = a.rows();
    let stacked = a.hstack(&b.scale(&field.int(-1)));
    let ker = stacked.kernel();
    let coeffs: Vec<Vec<Scalar>> = ker.iter().map(|v| v[..a.cols()].to_vec()).collect();
    if coeffs.is_empty() {
        return Matrix::zeros(field, n, 0);
    }
    a.mul(&Matrix::from_cols(field, a.cols(), &coeffs)).column_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    #[test]
    fn identity_has_full_rank() {
        let (r, k) = Matrix::identity(Q, 2).rank_kernel();
        assert_eq!(r, 2);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let (r, k) = Matrix::zeros(Q, 3, 2).rank_kernel();
        assert_eq!(r, 0);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn rank_one_kernel() {
        let m = Matrix::from_ints(Q, &[&[1, 2], &[2, 4]]);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k.len(), 1);
        // (2, -1) spans the kernel, so k[0] is a multiple of it.
        let v = &k[0];
        assert_eq!(&v[0] + &(&v[1] * &Q.int(2)), Q.zero());
        assert!(vec_is_zero(&m.mul_vec(v)));
    }

    #[test]
    fn solve_examples() {
        let b = vec![Q.int(3), Q.int(-5)];
        let (x, k) = Matrix::identity(Q, 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        assert!(k.is_empty());

        let a = Matrix::from_ints(Q, &[&[1, 1]]);
        let (x, k) = a.solve(&[Q.one()]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x), vec![Q.one()]);
        assert_eq!(k.len(), 1);

        assert!(Matrix::zeros(Q, 1, 1).solve(&[Q.one()]).unwrap().is_none());
        assert!(Matrix::zeros(Q, 1, 1).solve(&[Q.one(), Q.one()]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let (p, s) = quotient_basis(&Matrix::zeros(Q, 3, 0), 3);
        assert_eq!(p, Matrix::identity(Q, 3));
        assert_eq!(s.cols(), 3);

        let (p, _) = quotient_basis(&Matrix::identity(Q, 2), 2);
        assert_eq!(p.rows(), 0);

        let sub = Matrix::from_ints(Q, &[&[1], &[1]]);
        let (p, s) = quotient_basis(&sub, 2);
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&sub).is_zero());
        assert_eq!(p.mul(&s), Matrix::identity(Q, 1));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.int(3);
        assert_eq!(&a * &a.inv(), f.one());
        assert_eq!(&a + &(-&a), f.zero());
        assert!(Field::prime(9).is_err());
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(&f.rational(&half).unwrap() * &f.int(2), f.one());
        assert!(Field::Prime(2).rational(&half).is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let a = Q.rational(&BigRational::new(2.into(), (-4).into())).unwrap();
        match a {
            Scalar::Q(q) => {
                assert_eq!(q.numer(), &BigInt::from(-1));
                assert_eq!(q.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
    }

    fn gf7_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0i64..7, rows * cols).prop_map(move |v| {
            let f = Field::Prime(7);
            let rows_v: Vec<Vec<Scalar>> = v.chunks(cols).map(|c| c.iter().map(|&x| f.int(x)).collect()).collect();
            Matrix::from_rows(f, rows_v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn rank_nullity(m in gf7_matrix(6, 6)) {
            let (r, k) = m.rank_kernel();
            prop_assert_eq!(r + k.len(), 6);
            for v in &k {
                prop_assert!(vec_is_zero(&m.mul_vec(v)));
            }
            prop_assert_eq!(Matrix::from_cols(m.field(), 6, &k).rank(), k.len());
        }

        #[test]
        fn solve_reproduces_rhs(m in gf7_matrix(4, 5), b in proptest::collection::vec(0i64..7, 4)) {
            let f = Field::Prime(7);
            let b: Vec<Scalar> = b.into_iter().map(|x| f.int(x)).collect();
            if let Some((x, k)) = m.solve(&b).unwrap() {
                prop_assert_eq!(m.mul_vec(&x), b);
                prop_assert_eq!(k.len(), 5 - m.rank());
            } else {
                prop_assert!(m.hstack(&Matrix::from_cols(f, 4, &[b])).rank() > m.rank());
            }
        }

        #[test]
        fn row_permutation_keeps_kernel(m in gf7_matrix(5, 5), seed in 0usize..120) {
            let mut perm: Vec<usize> = (0..5).collect();
            let mut s = seed;
            for i in (1..5).rev() {
                perm.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let pm = m.select_rows(&perm);
            let k1 = m.kernel_matrix();
            let k2 = pm.kernel_matrix();
            prop_assert_eq!(k1.cols(), k2.cols());
            prop_assert_eq!(k1.hstack(&k2).rank(), k1.cols());
        }
    }
}
