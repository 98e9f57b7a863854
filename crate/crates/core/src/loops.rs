//! Paths and loops in `E(SL_n, k[T])`: the families `X_T`, `W_T`, `H_T`, `C_T`.
//!
//! Every family is a product of root-group paths `x_b(T s)` with `s` in `k`.
//! The letter sequences are exposed through [`x_letters`], [`w_letters`],
//! [`h_letters`] and [`c_letters`] so that the Steinberg-word layer lifts
//! exactly the same products.

use crate::arith::{BaseField, Poly, Ring, Scalar};
use crate::chevalley::{GroupMatrix, RootA};
use crate::error::{Error, Result};

/// Name of the path parameter.
pub const PATH_VAR: &str = "T";

pub fn path_ring(field: BaseField) -> Ring {
    Ring::univariate(field, PATH_VAR)
}

/// A matrix over `k[T]`, read as a path `t -> M(t)` in `SL_n(k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathMatrix {
    matrix: GroupMatrix,
}

impl PathMatrix {
    /// Wraps a matrix over a univariate polynomial ring.
    pub fn new(matrix: GroupMatrix) -> Result<Self> {
        if matrix.ring().nvars() != 1 {
            return Err(Error::UnsupportedRing(format!(
                "paths live over k[T], got {}",
                matrix.ring().descriptor()
            )));
        }
        Ok(PathMatrix { matrix })
    }

    pub fn constant_identity(field: BaseField, n: usize) -> Self {
        PathMatrix {
            matrix: GroupMatrix::identity(&path_ring(field), n),
        }
    }

    /// `prod_k x_{root_k}(T s_k)`.
    pub fn from_letters(field: BaseField, n: usize, letters: &[(RootA, Scalar)]) -> Result<Self> {
        let ring = path_ring(field);
        let t = ring.var(0);
        let mut m = GroupMatrix::identity(&ring, n);
        for (root, s) in letters {
            root.check(n)?;
            if s.field() != field {
                return Err(Error::RingMismatch("letter parameter from another field".into()));
            }
            m.mul_elementary_right(*root, &t.scale(s));
        }
        Ok(PathMatrix { matrix: m })
    }

    pub fn matrix(&self) -> &GroupMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> GroupMatrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn field(&self) -> BaseField {
        self.matrix.ring().base()
    }

    pub fn eval(&self, t: &Scalar) -> Result<GroupMatrix> {
        self.matrix.eval_at(t)
    }

    /// `(value at T = 0, value at T = 1)`.
    pub fn endpoints(&self) -> (GroupMatrix, GroupMatrix) {
        let f = self.field();
        (
            self.eval(&f.zero()).expect("univariate"),
            self.eval(&f.one()).expect("univariate"),
        )
    }

    pub fn is_path(&self) -> bool {
        self.endpoints().0.is_identity()
    }

    pub fn is_loop(&self) -> bool {
        let (start, end) = self.endpoints();
        start.is_identity() && end.is_identity()
    }

    pub fn mul(&self, other: &PathMatrix) -> Result<PathMatrix> {
        Ok(PathMatrix {
            matrix: self.matrix.checked_mul(&other.matrix)?,
        })
    }

    pub fn inverse(&self) -> PathMatrix {
        PathMatrix {
            matrix: self.matrix.inverse(),
        }
    }
}

fn unit_inverse(u: &Scalar) -> Result<Scalar> {
    u.inv().ok_or_else(|| Error::NotInvertible(u.to_string()))
}

/// Letters of `X_T(u)`: the single letter `(a, u)`.
pub fn x_letters(root: RootA, u: &Scalar) -> Vec<(RootA, Scalar)> {
    vec![(root, u.clone())]
}

/// Letters of `W_T(u) = X^a_T(u) X^{-a}_T(-u^{-1}) X^a_T(u)`.
pub fn w_letters(root: RootA, u: &Scalar) -> Result<Vec<(RootA, Scalar)>> {
    let inv = unit_inverse(u)?;
    Ok(vec![(root, u.clone()), (root.neg(), inv.neg()), (root, u.clone())])
}

/// Letters of `H_T(u) = W_T(u) W_T(1)^{-1}`, with `W_T(1)^{-1}` written as
/// the formal inverse of the three letters of `W_T(1)`.
pub fn h_letters(root: RootA, u: &Scalar) -> Result<Vec<(RootA, Scalar)>> {
    let one = u.field().one();
    let mut letters = w_letters(root, u)?;
    letters.extend(inverse_letters(&w_letters(root, &one)?));
    Ok(letters)
}

/// Letters of `C_T(a, b) = H_T(a) H_T(b) H_T(ab)^{-1}`.
pub fn c_letters(root: RootA, a: &Scalar, b: &Scalar) -> Result<Vec<(RootA, Scalar)>> {
    let mut letters = h_letters(root, a)?;
    letters.extend(h_letters(root, b)?);
    letters.extend(inverse_letters(&h_letters(root, &a.mul(b))?));
    Ok(letters)
}

/// Formal inverse: reversed order, negated parameters.
pub fn inverse_letters(letters: &[(RootA, Scalar)]) -> Vec<(RootA, Scalar)> {
    letters.iter().rev().map(|(r, s)| (*r, s.neg())).collect()
}

fn field_of(u: &Scalar) -> BaseField {
    u.field()
}

pub fn x_loop(n: usize, root: RootA, u: &Scalar) -> Result<PathMatrix> {
    PathMatrix::from_letters(field_of(u), n, &x_letters(root, u))
}

pub fn w_loop(n: usize, root: RootA, u: &Scalar) -> Result<PathMatrix> {
    PathMatrix::from_letters(field_of(u), n, &w_letters(root, u)?)
}

pub fn h_loop(n: usize, root: RootA, u: &Scalar) -> Result<PathMatrix> {
    PathMatrix::from_letters(field_of(u), n, &h_letters(root, u)?)
}

pub fn c_loop(n: usize, root: RootA, a: &Scalar, b: &Scalar) -> Result<PathMatrix> {
    if a.field() != b.field() {
        return Err(Error::RingMismatch("symbol arguments from different fields".into()));
    }
    PathMatrix::from_letters(field_of(a), n, &c_letters(root, a, b)?)
}

/// The correction matrix `D_T(u, v)` of the closed-form `SL_2` symbol loop,
/// as rows over `k[T]`. It is not a group element.
pub fn symbol_correction(u: &Scalar, v: &Scalar) -> Result<[[Poly; 2]; 2]> {
    unit_inverse(u)?;
    unit_inverse(v)?;
    let ring = path_ring(u.field());
    let t = ring.var(0);
    let one = ring.one();
    let two = ring.from_i64(2);
    let u_ = ring.constant(u.clone());
    let v_ = ring.constant(v.clone());
    let one_minus_u = one.sub(&u_);
    let t2 = t.pow(2);
    let t2m1 = t2.sub(&one);
    let t2m2 = t2.sub(&two);
    let t_t2m1_t2m2 = t.mul(&t2m1).mul(&t2m2);

    let d11 = u_.mul(&one_minus_u).mul(&t_t2m1_t2m2);
    let inner = t2m1.pow(2).mul(&one_minus_u).add(&u_);
    let d12 = v_.mul(&u_.pow(2)).mul(&inner).mul(&t2m2).neg();
    let d21 = one_minus_u.mul(&t2m1.pow(2)).sub(&one);
    let d22 = u_.mul(&v_).mul(&one_minus_u).mul(&t_t2m1_t2m2).neg();
    Ok([[d11, d12], [d21, d22]])
}

/// Closed form of the `SL_2` symbol loop for `x_a = e_12`:
/// `I + T (T^2 - 1) (1 - u)(1 - v) / (u^2 v) * D_T(u, v)`.
pub fn sl2_closed_form(u: &Scalar, v: &Scalar) -> Result<PathMatrix> {
    if u.field() != v.field() {
        return Err(Error::RingMismatch("symbol arguments from different fields".into()));
    }
    let d = symbol_correction(u, v)?;
    let field = u.field();
    let ring = path_ring(field);
    let t = ring.var(0);
    let one = field.one();
    let ratio = one
        .sub(u)
        .mul(&one.sub(v))
        .div(&u.mul(u).mul(v))
        .expect("u, v are units");
    let prefactor = t.mul(&t.pow(2).sub(&ring.one())).scale(&ratio);
    let rows = (0..2)
        .map(|r| {
            (0..2)
                .map(|c| {
                    let base = if r == c { ring.one() } else { ring.zero() };
                    base.add(&prefactor.mul(&d[r][c]))
                })
                .collect()
        })
        .collect();
    PathMatrix::new(GroupMatrix::from_rows(&ring, rows)?)
}

/// A formal product of paths and inverse paths in `SL_n(k[T])`.
#[derive(Clone, Debug)]
pub struct PathProduct {
    field: BaseField,
    n: usize,
    factors: Vec<(PathMatrix, bool)>,
}

impl PathProduct {
    /// The empty product (the constant identity path).
    pub fn new(field: BaseField, n: usize) -> Self {
        PathProduct {
            field,
            n,
            factors: Vec::new(),
        }
    }

    fn check(&self, path: &PathMatrix) -> Result<()> {
        if path.n() != self.n {
            return Err(Error::SizeMismatch(format!("SL_{} factor in an SL_{} product", path.n(), self.n)));
        }
        if path.field() != self.field {
            return Err(Error::RingMismatch("factor over a different field".into()));
        }
        Ok(())
    }

    pub fn times(mut self, path: PathMatrix) -> Result<Self> {
        self.check(&path)?;
        self.factors.push((path, false));
        Ok(self)
    }

    pub fn times_inverse(mut self, path: PathMatrix) -> Result<Self> {
        self.check(&path)?;
        self.factors.push((path, true));
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn evaluate(&self) -> PathMatrix {
        let mut acc = PathMatrix::constant_identity(self.field, self.n);
        for (p, inverted) in &self.factors {
            let factor = if *inverted { p.inverse() } else { p.clone() };
            acc = acc.mul(&factor).expect("factors checked on insertion");
        }
        acc
    }
}

/// The first entry at which two path products differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDifference {
    pub row: usize,
    pub col: usize,
    pub lhs: Poly,
    pub rhs: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCertificate {
    pub holds: bool,
    pub difference: Option<EntryDifference>,
}

/// Decides whether two products of paths agree as matrices over `k[T]`.
pub fn verify_path_identity(lhs: &PathProduct, rhs: &PathProduct) -> Result<IdentityCertificate> {
    if lhs.n != rhs.n {
        return Err(Error::SizeMismatch(format!("SL_{} vs SL_{}", lhs.n, rhs.n)));
    }
    if lhs.field != rhs.field {
        return Err(Error::RingMismatch("products over different fields".into()));
    }
    let a = lhs.evaluate();
    let b = rhs.evaluate();
    let difference = a.matrix.first_difference(&b.matrix).map(|(row, col)| EntryDifference {
        row,
        col,
        lhs: a.matrix.entry(row, col).clone(),
        rhs: b.matrix.entry(row, col).clone(),
    });
    Ok(IdentityCertificate {
        holds: difference.is_none(),
        difference,
    })
}

/// Entrywise `a - b`, for reporting mismatches.
pub fn difference_matrix(a: &GroupMatrix, b: &GroupMatrix) -> Vec<Vec<Poly>> {
    (0..a.n())
        .map(|r| (0..a.n()).map(|c| a.entry(r, c).sub(b.entry(r, c))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::h_elem;

    fn r12() -> RootA {
        RootA::new(1, 2).unwrap()
    }

    fn q(n: i64) -> Scalar {
        Scalar::rational(n, 1)
    }

    #[test]
    fn x_loop_basics() {
        let id = x_loop(3, r12(), &q(0)).unwrap();
        assert!(id.matrix().is_identity());
        let p = x_loop(3, r12(), &q(5)).unwrap();
        assert!(p.is_path());
        assert!(!p.is_loop());
        let ring = Ring::field(BaseField::Rationals);
        assert_eq!(p.endpoints().1, GroupMatrix::elementary(r12(), &ring.from_i64(5), 3).unwrap());
    }

    #[test]
    fn w_loop_sl2_entries() {
        // [[1 - T^2, T u (2 - T^2)], [-T/u, 1 - T^2]], expanded by hand
        let u = Scalar::rational(3, 2);
        let w = w_loop(2, r12(), &u).unwrap();
        let ring = path_ring(BaseField::Rationals);
        let t = ring.var(0);
        let one = ring.one();
        let t2 = t.pow(2);
        let expected = GroupMatrix::from_rows(
            &ring,
            vec![
                vec![one.sub(&t2), t.scale(&u).mul(&ring.from_i64(2).sub(&t2))],
                vec![t.scale(&Scalar::rational(-2, 3)), one.sub(&t2)],
            ],
        )
        .unwrap();
        assert_eq!(w.matrix(), &expected);
    }

    #[test]
    fn h_loop_endpoints() {
        let h1 = h_loop(2, r12(), &q(1)).unwrap();
        assert!(h1.matrix().is_identity());
        let h = h_loop(3, r12(), &q(4)).unwrap();
        assert!(h.is_path());
        assert!(!h.is_loop());
        let ring = Ring::field(BaseField::Rationals);
        assert_eq!(h.endpoints().1, h_elem(r12(), &ring.from_i64(4), 3).unwrap());
    }

    #[test]
    fn c_loop_trivial_arguments() {
        assert!(c_loop(2, r12(), &q(1), &q(7)).unwrap().matrix().is_identity());
        assert!(c_loop(2, r12(), &q(7), &q(1)).unwrap().matrix().is_identity());
        let c = c_loop(2, r12(), &q(2), &q(3)).unwrap();
        assert!(c.is_loop());
        assert!(!c.matrix().is_identity());
    }

    #[test]
    fn non_units_rejected() {
        assert!(matches!(h_loop(2, r12(), &q(0)), Err(Error::NotInvertible(_))));
        assert!(c_loop(2, r12(), &q(2), &q(0)).is_err());
        assert!(sl2_closed_form(&q(0), &q(2)).is_err());
    }

    #[test]
    fn closed_form_matches_definition() {
        let closed = sl2_closed_form(&q(2), &q(3)).unwrap();
        let defined = c_loop(2, r12(), &q(2), &q(3)).unwrap();
        assert_eq!(closed, defined);
    }

    #[test]
    fn closed_form_vanishing_points() {
        let c = sl2_closed_form(&Scalar::rational(5, 7), &q(-3)).unwrap();
        for t in [0, 1, -1] {
            assert!(c.eval(&q(t)).unwrap().is_identity());
        }
        assert!(sl2_closed_form(&q(1), &q(9)).unwrap().matrix().is_identity());
    }

    #[test]
    fn w_times_w_neg_is_identity() {
        let u = Scalar::rational(-4, 9);
        let lhs = PathProduct::new(BaseField::Rationals, 3)
            .times(w_loop(3, r12(), &u).unwrap())
            .unwrap()
            .times(w_loop(3, r12(), &u.neg()).unwrap())
            .unwrap();
        let cert = verify_path_identity(&lhs, &PathProduct::new(BaseField::Rationals, 3)).unwrap();
        assert!(cert.holds);
    }

    #[test]
    fn c_loop_is_definitional_product() {
        let (a, b) = (q(2), q(5));
        let lhs = PathProduct::new(BaseField::Rationals, 2)
            .times(c_loop(2, r12(), &a, &b).unwrap())
            .unwrap();
        let rhs = PathProduct::new(BaseField::Rationals, 2)
            .times(h_loop(2, r12(), &a).unwrap())
            .unwrap()
            .times(h_loop(2, r12(), &b).unwrap())
            .unwrap()
            .times_inverse(h_loop(2, r12(), &a.mul(&b)).unwrap())
            .unwrap();
        assert!(verify_path_identity(&lhs, &rhs).unwrap().holds);
    }

    #[test]
    fn torus_paths_do_not_commute() {
        let h = |x: i64| h_loop(2, r12(), &q(x)).unwrap();
        let lhs = PathProduct::new(BaseField::Rationals, 2).times(h(2)).unwrap().times(h(3)).unwrap();
        let rhs = PathProduct::new(BaseField::Rationals, 2).times(h(3)).unwrap().times(h(2)).unwrap();
        let cert = verify_path_identity(&lhs, &rhs).unwrap();
        assert!(!cert.holds);
        let diff = cert.difference.unwrap();
        assert_ne!(diff.lhs, diff.rhs);
    }

    #[test]
    fn mismatched_products() {
        let a = PathProduct::new(BaseField::Rationals, 2);
        let b = PathProduct::new(BaseField::Rationals, 3);
        assert!(matches!(verify_path_identity(&a, &b), Err(Error::SizeMismatch(_))));
        assert!(a.times(x_loop(3, r12(), &q(1)).unwrap()).is_err());
    }
}
