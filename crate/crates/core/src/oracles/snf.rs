//! Sparse Smith normal form over the integers.
//!
//! Elimination always pivots on an entry of minimal absolute value, breaking
//! ties by the Markowitz cost `(row nnz - 1) * (col nnz - 1)`. Unit pivots clear
//! their column with row operations and then drop out together with their row;
//! non-unit pivots are reduced by Euclidean division until they divide their
//! row and column. Arithmetic runs in checked `i64` and restarts in `BigInt` on
//! overflow. The resulting rank is cross-checked modulo two large primes.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// A sparse integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds from rows of `(column, value)` pairs; duplicates are summed.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, i64)>>) -> Self {
        let data = rows
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|&(c, _)| c);
                let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    assert!(c < cols, "column {c} out of range");
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|&(_, v)| v != 0);
                merged
            })
            .collect::<Vec<_>>();
        SparseIntMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseIntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                data[c].push((r, v));
            }
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Permutes rows and columns: row `r` moves to `row_perm[r]`, column `c` to `col_perm[c]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseIntMatrix {
        let mut data = vec![Vec::new(); self.rows];
        for (r, row) in self.data.iter().enumerate() {
            data[row_perm[r]] = row.iter().map(|&(c, v)| (col_perm[c], v)).collect();
        }
        SparseIntMatrix::from_rows(self.cols, data)
    }

    /// Exact product `self * other`, or `None` on overflow.
    pub fn checked_mul(&self, other: &SparseIntMatrix) -> Option<SparseIntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    let e = acc.entry(c).or_insert(0);
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            out.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Some(SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }
}

/// Result of [`smith_normal_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, units included.
    pub diagonal: Vec<BigInt>,
    /// `nrows - rank`: free rank of the cokernel of `Z^cols -> Z^rows`.
    pub free_rank: usize,
    pub rank: usize,
    /// The ranks modulo two large primes agreed with `rank`.
    pub modular_check: bool,
}

impl SmithForm {
    /// The diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form of an integer matrix, returning its invariant factors.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let diagonal = elimination_diagonal(m);
    let rank = diagonal.len();
    let diagonal = divisibility_chain(diagonal);
    let modular_check = modular_rank_check(m, &diagonal);
    SmithForm {
        free_rank: m.nrows() - rank,
        rank,
        diagonal,
        modular_check,
    }
}

/// Rank over the rationals, computed modulo a large prime twice.
pub fn rank(m: &SparseIntMatrix) -> usize {
    smith_normal_form(m).rank
}

fn elimination_diagonal(m: &SparseIntMatrix) -> Vec<BigInt> {
    let rows: Vec<Vec<(usize, i64)>> = m.data.clone();
    match eliminate::<Checked>(m.cols, rows.iter().map(|r| r.iter().map(|&(c, v)| (c, Checked(v))).collect()).collect()) {
        Some(d) => d.into_iter().map(|x| BigInt::from(x.0)).collect(),
        None => {
            let big = rows
                .iter()
                .map(|r| r.iter().map(|&(c, v)| (c, Big(BigInt::from(v)))).collect())
                .collect();
            eliminate::<Big>(m.cols, big)
                .expect("BigInt elimination cannot overflow")
                .into_iter()
                .map(|x| x.0)
                .collect()
        }
    }
}

/// Turns a diagonal into the invariant-factor chain by repeated gcd/lcm.
fn divisibility_chain(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    for d in diag.iter_mut() {
        *d = d.abs();
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (a, b) = (&diag[i], &diag[j]);
            if (b % a).is_zero() {
                continue;
            }
            let g = a.gcd(b);
            let l = a.lcm(b);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag.sort();
    diag
}

const CHECK_PRIMES: [u64; 6] = [
    2_147_483_647,
    2_147_483_629,
    2_147_483_587,
    2_147_483_579,
    2_147_483_563,
    2_147_483_549,
];

fn modular_rank_check(m: &SparseIntMatrix, diagonal: &[BigInt]) -> bool {
    // two primes dividing no invariant factor
    let primes: Vec<u64> = CHECK_PRIMES
        .iter()
        .copied()
        .filter(|&p| diagonal.iter().all(|d| !(d % BigInt::from(p)).is_zero()))
        .take(2)
        .collect();
    primes.iter().all(|&p| {
        let rows = m
            .data
            .iter()
            .map(|r| r.iter().map(|&(c, v)| (c, ModP::new(v, p))).collect())
            .collect();
        eliminate::<ModP>(m.cols, rows).map(|d| d.len()) == Some(diagonal.len())
    })
}

/// Coefficient domains for the elimination engine.
trait Euclid: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn is_unit(&self) -> bool;
    /// Pivot preference; smaller is better.
    fn size(&self) -> u64;
    /// `(q, r)` with `self = q * d + r` and `size(r) < size(d)`.
    fn div_rem(&self, d: &Self) -> (Self, Self);
    /// `self - q * b`, `None` on overflow.
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
}

#[derive(Clone, PartialEq, Debug)]
struct Checked(i64);

impl Euclid for Checked {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn zero_like(&self) -> Self {
        Checked(0)
    }
    fn is_unit(&self) -> bool {
        self.0 == 1 || self.0 == -1
    }
    fn size(&self) -> u64 {
        self.0.unsigned_abs()
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        // round to nearest so that |r| <= |d| / 2
        let q = self.0.div_euclid(d.0);
        let r = self.0.rem_euclid(d.0);
        if r.unsigned_abs() * 2 > d.0.unsigned_abs() {
            let s = d.0.signum();
            (Checked(q + s), Checked(r - d.0.abs()))
        } else {
            (Checked(q), Checked(r))
        }
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.0.checked_sub(q.0.checked_mul(b.0)?).map(Checked)
    }
}

#[derive(Clone, PartialEq, Debug)]
struct Big(BigInt);

impl Euclid for Big {
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn zero_like(&self) -> Self {
        Big(BigInt::zero())
    }
    fn is_unit(&self) -> bool {
        self.0.abs().is_one()
    }
    fn size(&self) -> u64 {
        self.0.abs().to_u64().unwrap_or(u64::MAX)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let (q, r) = self.0.div_mod_floor(&d.0);
        let two_r: BigInt = &r * 2;
        if two_r.abs() > d.0.abs() {
            (Big(q + 1), Big(r - &d.0))
        } else {
            (Big(q), Big(r))
        }
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(Big(&self.0 - &q.0 * &b.0))
    }
}

#[derive(Clone, PartialEq, Debug)]
struct ModP {
    v: u64,
    p: u64,
}

impl ModP {
    fn new(v: i64, p: u64) -> Self {
        ModP {
            v: v.rem_euclid(p as i64) as u64,
            p,
        }
    }

    fn inv(&self) -> u64 {
        let mut acc: u128 = 1;
        let mut b = self.v as u128;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p as u128;
            }
            b = b * b % self.p as u128;
            e >>= 1;
        }
        acc as u64
    }
}

impl Euclid for ModP {
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn zero_like(&self) -> Self {
        ModP { v: 0, p: self.p }
    }
    fn is_unit(&self) -> bool {
        self.v != 0
    }
    fn size(&self) -> u64 {
        u64::from(self.v != 0)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let q = (self.v as u128 * d.inv() as u128 % self.p as u128) as u64;
        (ModP { v: q, p: self.p }, ModP { v: 0, p: self.p })
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        let prod = (q.v as u128 * b.v as u128 % self.p as u128) as u64;
        Some(ModP {
            v: (self.v + self.p - prod) % self.p,
            p: self.p,
        })
    }
}

/// Sparse working matrix with a column index.
struct Work<R> {
    rows: Vec<Vec<(usize, R)>>,
    alive: Vec<bool>,
    cols: Vec<HashSet<usize>>,
}

impl<R: Euclid> Work<R> {
    fn new(ncols: usize, rows: Vec<Vec<(usize, R)>>) -> Self {
        let mut cols = vec![HashSet::new(); ncols];
        let rows: Vec<Vec<(usize, R)>> = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                cols[*c].insert(r);
            }
        }
        let alive = vec![true; rows.len()];
        Work { rows, alive, cols }
    }

    fn get(&self, r: usize, c: usize) -> Option<&R> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(cc, _)| *cc).ok().map(|k| &row[k].1)
    }

    /// row_t <- row_t - q * row_s
    fn row_sub(&mut self, t: usize, s: usize, q: &R) -> Option<()> {
        let src = std::mem::take(&mut self.rows[s]);
        let dst = std::mem::take(&mut self.rows[t]);
        let mut out = Vec::with_capacity(dst.len() + src.len());
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
            let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
            if take_dst {
                out.push(dst[i].clone());
                i += 1;
            } else if take_src {
                let (c, v) = &src[j];
                let nv = v.zero_like().sub_mul(q, v)?;
                if !nv.is_zero() {
                    self.cols[*c].insert(t);
                    out.push((*c, nv));
                }
                j += 1;
            } else {
                let (c, a) = &dst[i];
                let nv = a.sub_mul(q, &src[j].1)?;
                if nv.is_zero() {
                    self.cols[*c].remove(&t);
                } else {
                    out.push((*c, nv));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[s] = src;
        self.rows[t] = out;
        Some(())
    }

    fn set_entry(&mut self, r: usize, c: usize, v: R) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(cc, _)| *cc) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                    self.cols[c].remove(&r);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (c, v));
                    self.cols[c].insert(r);
                }
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
        self.alive[r] = false;
    }

    /// Minimal-size entry, then minimal Markowitz cost, then position.
    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<((u64, usize, usize, usize), (usize, usize))> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.alive[r] {
                continue;
            }
            for (c, v) in row {
                let cost = (row.len() - 1) * (self.cols[*c].len() - 1);
                let key = (v.size(), cost, r, *c);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, (r, *c)));
                }
            }
        }
        best.map(|(_, pos)| pos)
    }
}

/// Returns the (unnormalized) nonzero diagonal, or `None` on overflow.
fn eliminate<R: Euclid>(ncols: usize, rows: Vec<Vec<(usize, R)>>) -> Option<Vec<R>> {
    let mut w = Work::new(ncols, rows);
    let mut diagonal = Vec::new();
    'outer: while let Some((r, c)) = w.choose_pivot() {
        let pivot = w.get(r, c).unwrap().clone();
        // clear the pivot column below and above
        let others: BTreeSet<usize> = w.cols[c].iter().copied().filter(|&t| t != r).collect();
        let mut dirty = false;
        for t in others {
            let a = w.get(t, c).unwrap().clone();
            let (q, rem) = a.div_rem(&pivot);
            if !q.is_zero() {
                w.row_sub(t, r, &q)?;
            }
            if !rem.is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue 'outer;
        }
        if !pivot.is_unit() {
            // column ops: only row r has entries in column c now
            let row: Vec<(usize, R)> = w.rows[r].iter().filter(|(cc, _)| *cc != c).cloned().collect();
            for (cc, a) in row {
                let (_, rem) = a.div_rem(&pivot);
                if !rem.is_zero() {
                    dirty = true;
                }
                w.set_entry(r, cc, rem);
            }
            if dirty {
                continue 'outer;
            }
        }
        diagonal.push(pivot);
        w.remove_row(r);
    }
    Some(diagonal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diag_two_three() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal, ints(&[1, 6]));
        assert_eq!(s.free_rank, 0);
        assert!(s.modular_check);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&SparseIntMatrix::zeros(3, 5));
        assert!(s.diagonal.is_empty());
        assert_eq!(s.free_rank, 3);
    }

    #[test]
    fn identity() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal, ints(&[1, 1, 1]));
        assert_eq!(s.free_rank, 0);
    }

    #[test]
    fn classic_example() {
        // SNF diag(2, 6, 12)
        let m = SparseIntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(smith_normal_form(&m).diagonal, ints(&[2, 6, 12]));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let m = SparseIntMatrix::from_dense(&[vec![big, big - 1], vec![big - 2, big - 7]]);
        let s = smith_normal_form(&m);
        // det = big*(big-7) - (big-1)(big-2) = -4 big - 2
        let det = BigInt::from(big) * 4 + 2;
        assert_eq!(s.diagonal.iter().product::<BigInt>(), det);
        assert!(s.modular_check);
    }

    /// Dense Gaussian determinant over Q, used to check the product of factors.
    fn det_rational(rows: &[Vec<i64>]) -> num_rational::BigRational {
        use num_rational::BigRational;
        let n = rows.len();
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let sub = &f * &a[c][k];
                    a[r][k] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn random_square_matrices_match_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..6);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let s = smith_normal_form(&SparseIntMatrix::from_dense(&rows));
            let det = det_rational(&rows);
            if det.is_zero() {
                assert!(s.rank < n);
            } else {
                assert_eq!(s.rank, n);
                assert_eq!(BigInt::from(s.diagonal.iter().product::<BigInt>()), det.to_integer().abs());
            }
            for w in s.diagonal.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
            assert!(s.modular_check);
        }
    }

    #[test]
    fn permutation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let (nr, nc) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| if rng.gen_bool(0.4) { rng.gen_range(-9..=9) } else { 0 }).collect())
                .collect();
            let m = SparseIntMatrix::from_dense(&rows);
            let mut rp: Vec<usize> = (0..nr).collect();
            let mut cp: Vec<usize> = (0..nc).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            assert_eq!(
                smith_normal_form(&m).diagonal,
                smith_normal_form(&m.permuted(&rp, &cp)).diagonal
            );
            assert_eq!(smith_normal_form(&m).diagonal, smith_normal_form(&m.transpose()).diagonal);
        }
    }

    #[test]
    fn sparse_product() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseIntMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p, SparseIntMatrix::from_dense(&[vec![1, 0], vec![0, 1]]));
    }
}
