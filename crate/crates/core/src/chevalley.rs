//! `SL_n` over a [`Ring`], with root-group generators `x_a(u)`, Weyl elements
//! `w_a(u)` and torus elements `h_a(u)` for the type-A root system.

use std::fmt;

use crate::arith::{Poly, Ring, Scalar};
use crate::error::{Error, Result};

/// The type-A root `e_i - e_j`, stored with 1-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootA {
    i: usize,
    j: usize,
}

impl RootA {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::InvalidRoot { i, j, n: 0 });
        }
        Ok(RootA { i, j })
    }

    /// Root valid for `SL_n`.
    pub fn in_rank(i: usize, j: usize, n: usize) -> Result<Self> {
        let root = RootA::new(i, j).map_err(|_| Error::InvalidRoot { i, j, n })?;
        root.check(n)?;
        Ok(root)
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn neg(&self) -> RootA {
        RootA { i: self.j, j: self.i }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.i > n || self.j > n {
            Err(Error::InvalidRoot { i: self.i, j: self.j, n })
        } else {
            Ok(())
        }
    }

    /// All roots of `SL_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<RootA> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    out.push(RootA { i, j });
                }
            }
        }
        out
    }

    /// Parses `"i,j"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("root {s:?} should look like i,j")))?;
        let i = a.trim().parse().map_err(|_| Error::Parse(format!("bad root index in {s:?}")))?;
        let j = b.trim().parse().map_err(|_| Error::Parse(format!("bad root index in {s:?}")))?;
        RootA::new(i, j)
    }
}

impl fmt::Debug for RootA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// An `n x n` matrix of determinant 1 over a ring.
///
/// The determinant is checked by [`GroupMatrix::from_rows`]; every other
/// constructor produces products of elementary matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupMatrix {
    n: usize,
    ring: Ring,
    entries: Vec<Poly>,
}

impl GroupMatrix {
    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for k in 0..n {
            entries[k * n + k] = ring.one();
        }
        GroupMatrix {
            n,
            ring: ring.clone(),
            entries,
        }
    }

    /// Checked constructor from rows.
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::SizeMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::SizeMismatch(format!("row of length {} in a {n}x{n} matrix", row.len())));
            }
            for p in row {
                ring.ensure_same(p.ring())?;
                entries.push(p);
            }
        }
        let det = determinant(n, ring, &entries);
        if !det.is_one() {
            return Err(Error::DeterminantNotOne(det.to_string()));
        }
        Ok(GroupMatrix {
            n,
            ring: ring.clone(),
            entries,
        })
    }

    /// `x_a(a)`: the identity with `a` at position `(i, j)`.
    pub fn elementary(root: RootA, a: &Poly, n: usize) -> Result<Self> {
        root.check(n)?;
        let mut m = GroupMatrix::identity(a.ring(), n);
        m.entries[(root.i - 1) * n + (root.j - 1)] = a.clone();
        Ok(m)
    }

    /// Product of elementary matrices `x_{a_1}(f_1) x_{a_2}(f_2) ...`.
    pub fn from_elementaries<'a>(
        ring: &Ring,
        n: usize,
        factors: impl IntoIterator<Item = (RootA, &'a Poly)>,
    ) -> Result<Self> {
        let mut m = GroupMatrix::identity(ring, n);
        for (root, f) in factors {
            root.check(n)?;
            ring.ensure_same(f.ring())?;
            m.mul_elementary_right(root, f);
        }
        Ok(m)
    }

    /// `w_a(u) = x_a(u) x_{-a}(-u^{-1}) x_a(u)`.
    pub fn weyl(root: RootA, u: &Poly, n: usize) -> Result<Self> {
        root.check(n)?;
        let inv = u.inv().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
        let ring = u.ring();
        GroupMatrix::from_elementaries(ring, n, [(root, u), (root.neg(), &inv.neg()), (root, u)])
    }

    /// `h_a(u) = w_a(u) w_a(1)^{-1}`, i.e. `diag(.., u, .., u^{-1}, ..)`.
    pub fn torus(root: RootA, u: &Poly, n: usize) -> Result<Self> {
        let w = GroupMatrix::weyl(root, u, n)?;
        // w_a(1)^{-1} = w_a(-1)
        let minus_one = u.ring().one().neg();
        Ok(w.mul(&GroupMatrix::weyl(root, &minus_one, n)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<Poly>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let e = self.entry(r, c);
                if r == c {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    fn ensure_compatible(&self, other: &GroupMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("SL_{} vs SL_{}", self.n, other.n)));
        }
        self.ring.ensure_same(&other.ring)
    }

    pub fn checked_mul(&self, other: &GroupMatrix) -> Result<GroupMatrix> {
        self.ensure_compatible(other)?;
        Ok(self.mul(other))
    }

    /// Matrix product; panics on size or ring mismatch (see [`Self::checked_mul`]).
    pub fn mul(&self, other: &GroupMatrix) -> GroupMatrix {
        if let Err(e) = self.ensure_compatible(other) {
            panic!("{e}");
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = self.ring.zero();
                for k in 0..n {
                    let a = self.entry(r, k);
                    let b = other.entry(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                entries.push(acc);
            }
        }
        GroupMatrix {
            n,
            ring: self.ring.clone(),
            entries,
        }
    }

    /// `self <- self * x_root(f)`: adds `f` times column `i` to column `j`.
    pub fn mul_elementary_right(&mut self, root: RootA, f: &Poly) {
        if f.is_zero() {
            return;
        }
        let (i, j, n) = (root.i - 1, root.j - 1, self.n);
        for r in 0..n {
            let a = &self.entries[r * n + i];
            if !a.is_zero() {
                let updated = self.entries[r * n + j].add(&a.mul(f));
                self.entries[r * n + j] = updated;
            }
        }
    }

    /// `self <- x_root(f) * self`: adds `f` times row `j` to row `i`.
    pub fn mul_elementary_left(&mut self, root: RootA, f: &Poly) {
        if f.is_zero() {
            return;
        }
        let (i, j, n) = (root.i - 1, root.j - 1, self.n);
        for c in 0..n {
            let b = &self.entries[j * n + c];
            if !b.is_zero() {
                let updated = self.entries[i * n + c].add(&f.mul(b));
                self.entries[i * n + c] = updated;
            }
        }
    }

    pub fn determinant(&self) -> Poly {
        determinant(self.n, &self.ring, &self.entries)
    }

    /// Inverse via the adjugate (the determinant is 1).
    pub fn inverse(&self) -> GroupMatrix {
        let n = self.n;
        if n == 1 {
            return self.clone();
        }
        let mut entries = vec![self.ring.zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let minor: Vec<Poly> = (0..n)
                    .filter(|&rr| rr != r)
                    .flat_map(|rr| (0..n).filter(move |&cc| cc != c).map(move |cc| (rr, cc)))
                    .map(|(rr, cc)| self.entry(rr, cc).clone())
                    .collect();
                let cof = determinant(n - 1, &self.ring, &minor);
                // adj[c][r] = (-1)^{r+c} det(minor_{r,c})
                entries[c * n + r] = if (r + c) % 2 == 0 { cof } else { cof.neg() };
            }
        }
        GroupMatrix {
            n,
            ring: self.ring.clone(),
            entries,
        }
    }

    /// Entrywise ring homomorphism into `target`. The caller guarantees that
    /// `f` is a ring homomorphism, so the determinant stays 1.
    pub fn map_entries(&self, target: &Ring, f: impl Fn(&Poly) -> Result<Poly>) -> Result<GroupMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        for e in &entries {
            target.ensure_same(e.ring())?;
        }
        Ok(GroupMatrix {
            n: self.n,
            ring: target.clone(),
            entries,
        })
    }

    /// Evaluates a matrix over `k[T]` at `T = t`.
    pub fn eval_at(&self, t: &Scalar) -> Result<GroupMatrix> {
        if self.ring.nvars() != 1 {
            return Err(Error::UnsupportedRing(format!(
                "evaluation needs a univariate ring, got {}",
                self.ring.descriptor()
            )));
        }
        let target = Ring::field(self.ring.base());
        self.map_entries(&target, |p| p.eval_at(t).map(|c| target.constant(c)))
    }

    /// Reinterprets the entries in a ring with the same shape (variables renamed).
    pub fn rename_into(&self, target: &Ring) -> Result<GroupMatrix> {
        self.map_entries(target, |p| p.rename_into(target))
    }

    /// Embeds a matrix over `k` into a polynomial ring over `k`.
    pub fn lift_constants(&self, target: &Ring) -> Result<GroupMatrix> {
        self.map_entries(target, |p| p.lift_constant(target))
    }

    /// First position where the two matrices differ.
    pub fn first_difference(&self, other: &GroupMatrix) -> Option<(usize, usize)> {
        (0..self.n * self.n)
            .find(|&k| self.entries[k] != other.entries[k])
            .map(|k| (k / self.n, k % self.n))
    }
}

/// Division-free determinant by dynamic programming over column subsets.
fn determinant(n: usize, ring: &Ring, entries: &[Poly]) -> Poly {
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 16, "determinant limited to n <= 16");
    let mut table: Vec<Option<Poly>> = vec![None; 1 << n];
    table[0] = Some(ring.one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = table[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            return acc;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let a = &entries[row * n + col];
            if a.is_zero() {
                continue;
            }
            // parity of already-used columns to the right of `col`
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = acc.mul(a);
            if inversions % 2 == 1 {
                term = term.neg();
            }
            let slot = &mut table[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(prev) => prev.add(&term),
                None => term,
            });
        }
    }
    ring.zero()
}

impl fmt::Display for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.entries.chunks(self.n).enumerate() {
            if r > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SL_{}({}) {self}", self.n, self.ring.descriptor())
    }
}

/// `x_a(a)` for a scalar parameter.
pub fn elem(root: RootA, a: &Poly, n: usize) -> Result<GroupMatrix> {
    GroupMatrix::elementary(root, a, n)
}

pub fn w_elem(root: RootA, u: &Poly, n: usize) -> Result<GroupMatrix> {
    GroupMatrix::weyl(root, u, n)
}

pub fn h_elem(root: RootA, u: &Poly, n: usize) -> Result<GroupMatrix> {
    GroupMatrix::torus(root, u, n)
}

/// `eval_matrix`: entrywise evaluation of a matrix over `k[T]`.
pub fn eval_matrix(m: &GroupMatrix, t: &Scalar) -> Result<GroupMatrix> {
    m.eval_at(t)
}

/// The group commutator `a b a^{-1} b^{-1}`.
pub fn commutator(a: &GroupMatrix, b: &GroupMatrix) -> GroupMatrix {
    a.mul(b).mul(&a.inverse()).mul(&b.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{random_poly, random_scalar, random_unit, BaseField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Ring {
        Ring::field(BaseField::Rationals)
    }

    fn r(i: usize, j: usize) -> RootA {
        RootA::new(i, j).unwrap()
    }

    fn mat(ring: &Ring, rows: &[&[i64]]) -> GroupMatrix {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&x| ring.from_i64(x)).collect())
            .collect();
        GroupMatrix::from_rows(ring, rows).unwrap()
    }

    #[test]
    fn elem_zero_is_identity() {
        assert!(elem(r(1, 2), &q().zero(), 2).unwrap().is_identity());
    }

    #[test]
    fn elem_product_corner() {
        let ring = q();
        let a = ring.from_i64(5);
        let b = ring.from_i64(-3);
        let m = elem(r(1, 2), &a, 3).unwrap().mul(&elem(r(2, 3), &b, 3).unwrap());
        assert_eq!(m.entry(0, 2), &ring.from_i64(-15));
    }

    #[test]
    fn invalid_roots() {
        assert!(RootA::new(2, 2).is_err());
        assert!(matches!(
            elem(r(1, 3), &q().one(), 2),
            Err(Error::InvalidRoot { i: 1, j: 3, n: 2 })
        ));
    }

    #[test]
    fn weyl_in_sl2_and_sl3() {
        let ring = q();
        let w = w_elem(r(1, 2), &ring.one(), 2).unwrap();
        assert_eq!(w, mat(&ring, &[&[0, 1], &[-1, 0]]));
        let u = ring.from_i64(2);
        let w3 = w_elem(r(1, 2), &u, 3).unwrap();
        let half = ring.constant(Scalar::rational(-1, 2));
        let expected = GroupMatrix::from_rows(
            &ring,
            vec![
                vec![ring.zero(), u.clone(), ring.zero()],
                vec![half, ring.zero(), ring.zero()],
                vec![ring.zero(), ring.zero(), ring.one()],
            ],
        )
        .unwrap();
        assert_eq!(w3, expected);
        let winv = w_elem(r(1, 2), &u.neg(), 3).unwrap();
        assert!(w3.mul(&winv).is_identity());
        assert_eq!(w3.inverse(), winv);
    }

    #[test]
    fn weyl_rejects_non_units() {
        assert!(matches!(
            w_elem(r(1, 2), &q().zero(), 2),
            Err(Error::NotInvertible(_))
        ));
        let qt = Ring::univariate(BaseField::Rationals, "T");
        assert!(w_elem(r(1, 2), &qt.var(0), 2).is_err());
    }

    #[test]
    fn torus_is_diagonal() {
        let ring = q();
        let u = ring.from_i64(3);
        let h = h_elem(r(1, 2), &u, 3).unwrap();
        let third = ring.constant(Scalar::rational(1, 3));
        let expected = GroupMatrix::from_rows(
            &ring,
            vec![
                vec![u.clone(), ring.zero(), ring.zero()],
                vec![ring.zero(), third, ring.zero()],
                vec![ring.zero(), ring.zero(), ring.one()],
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
        assert!(h_elem(r(2, 3), &ring.one(), 3).unwrap().is_identity());
    }

    #[test]
    fn determinant_checked() {
        let ring = q();
        let rows = vec![
            vec![ring.from_i64(2), ring.zero()],
            vec![ring.zero(), ring.from_i64(1)],
        ];
        assert!(matches!(
            GroupMatrix::from_rows(&ring, rows),
            Err(Error::DeterminantNotOne(_))
        ));
        assert!(GroupMatrix::from_rows(&ring, vec![vec![ring.one(), ring.zero()]]).is_err());
    }

    #[test]
    fn eval_of_path_endpoints() {
        let qt = Ring::univariate(BaseField::Rationals, "T");
        let u = Scalar::rational(7, 3);
        let m = elem(r(2, 1), &qt.var(0).scale(&u), 2).unwrap();
        assert!(eval_matrix(&m, &Scalar::rational(0, 1)).unwrap().is_identity());
        assert_eq!(
            eval_matrix(&m, &Scalar::rational(1, 1)).unwrap(),
            elem(r(2, 1), &q().constant(u), 2).unwrap()
        );
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let ring = q();
        let a = GroupMatrix::identity(&ring, 2);
        let b = GroupMatrix::identity(&ring, 3);
        assert!(matches!(a.checked_mul(&b), Err(Error::SizeMismatch(_))));
    }

    proptest! {
        #[test]
        fn additivity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = Ring::univariate(BaseField::finite(7).unwrap(), "T");
            let a = random_poly(&mut rng, &ring, 3, 3);
            let b = random_poly(&mut rng, &ring, 3, 3);
            for root in RootA::all(3) {
                let lhs = elem(root, &a, 3).unwrap().mul(&elem(root, &b, 3).unwrap());
                prop_assert_eq!(lhs, elem(root, &a.add(&b), 3).unwrap());
            }
        }

        #[test]
        fn torus_multiplicative_over_f11(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = BaseField::finite(11).unwrap();
            let ring = Ring::field(field);
            let u = ring.constant(random_unit(&mut rng, field, 1));
            let v = ring.constant(random_unit(&mut rng, field, 1));
            for root in RootA::all(3) {
                let lhs = h_elem(root, &u, 3).unwrap().mul(&h_elem(root, &v, 3).unwrap());
                prop_assert_eq!(lhs, h_elem(root, &u.mul(&v), 3).unwrap());
            }
        }

        #[test]
        fn eval_commutes_with_products(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ring = Ring::univariate(BaseField::Rationals, "T");
            let roots = RootA::all(3);
            let params: Vec<(RootA, Poly)> = (0..6)
                .map(|k| (roots[(seed as usize + k * 5) % roots.len()], random_poly(&mut rng, &ring, 2, 2)))
                .collect();
            let a = GroupMatrix::from_elementaries(&ring, 3, params[..3].iter().map(|(r, p)| (*r, p))).unwrap();
            let b = GroupMatrix::from_elementaries(&ring, 3, params[3..].iter().map(|(r, p)| (*r, p))).unwrap();
            let t = random_scalar(&mut rng, BaseField::Rationals, 5);
            let lhs = a.mul(&b).eval_at(&t).unwrap();
            prop_assert_eq!(lhs, a.eval_at(&t).unwrap().mul(&b.eval_at(&t).unwrap()));
            prop_assert!(a.mul(&b).determinant().is_one());
        }
    }

    #[test]
    fn chevalley_commutator_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ring = q();
        let n = 4;
        for _ in 0..3 {
            let a = ring.constant(random_unit(&mut rng, BaseField::Rationals, 9));
            let b = ring.constant(random_unit(&mut rng, BaseField::Rationals, 9));
            for x in RootA::all(n) {
                for y in RootA::all(n) {
                    if x == y.neg() || x == y {
                        continue;
                    }
                    let c = commutator(&elem(x, &a, n).unwrap(), &elem(y, &b, n).unwrap());
                    let expected = if x.j() != y.i() && x.i() != y.j() {
                        GroupMatrix::identity(&ring, n)
                    } else if x.j() == y.i() {
                        elem(RootA::new(x.i(), y.j()).unwrap(), &a.mul(&b), n).unwrap()
                    } else {
                        elem(RootA::new(y.i(), x.j()).unwrap(), &a.mul(&b).neg(), n).unwrap()
                    };
                    assert_eq!(c, expected, "[x{x:?}, x{y:?}]");
                }
            }
        }
    }
}
