//! Elementary factorization in `SL_n(R)` for `R` a field or `k[T]`, and the
//! translation between paths over `k[T]` and Steinberg words over `k`.
//!
//! Elimination runs the Euclidean algorithm down each column with row
//! operations `x_{r,p}(-q)`, pivoting on an entry of minimal degree (lowest row
//! on ties). The diagonal that remains is written as a product of torus
//! elements `h_{i,i+1}(d_1 ... d_i)`, each expanded into six elementaries.

use crate::arith::{BaseField, Poly, Ring};
use crate::chevalley::{GroupMatrix, RootA};
use crate::error::{Error, Result};
use crate::loops::PathMatrix;
use crate::steinberg::{Letter, SteinbergWord};

/// One factor `x_root(param)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryFactor {
    pub root: RootA,
    pub param: Poly,
}

impl ElementaryFactor {
    fn new(root: RootA, param: Poly) -> Self {
        ElementaryFactor { root, param }
    }
}

/// Re-multiplies a factor list.
pub fn multiply_factors(ring: &Ring, n: usize, factors: &[ElementaryFactor]) -> Result<GroupMatrix> {
    GroupMatrix::from_elementaries(ring, n, factors.iter().map(|f| (f.root, &f.param)))
}

struct Elimination {
    n: usize,
    rows: Vec<Vec<Poly>>,
    /// Left operations `L_1, L_2, ...` applied so far, as `(root, param)`.
    ops: Vec<ElementaryFactor>,
}

impl Elimination {
    /// `rows <- x_{target,source}(f) * rows`.
    fn add_row(&mut self, target: usize, source: usize, f: Poly) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.n {
            if !self.rows[source][c].is_zero() {
                let v = self.rows[target][c].add(&f.mul(&self.rows[source][c]));
                self.rows[target][c] = v;
            }
        }
        let root = RootA::new(target + 1, source + 1).expect("distinct rows");
        self.ops.push(ElementaryFactor::new(root, f));
    }

    fn pivot_row(&self, col: usize) -> Option<usize> {
        (col..self.n)
            .filter(|&r| !self.rows[r][col].is_zero())
            .min_by_key(|&r| (self.rows[r][col].degree().unwrap_or(0), r))
    }

    fn reduce_column(&mut self, col: usize) -> Result<()> {
        let pivot = loop {
            let p = self
                .pivot_row(col)
                .ok_or_else(|| Error::DeterminantNotOne("singular column".into()))?;
            let mut done = true;
            for r in col..self.n {
                if r == p || self.rows[r][col].is_zero() {
                    continue;
                }
                let (q, rem) = self.rows[r][col].divmod(&self.rows[p][col])?;
                self.add_row(r, p, q.neg());
                debug_assert_eq!(self.rows[r][col], rem);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break p;
            }
        };
        if pivot != col {
            // row_col += row_p, then row_p -= row_col
            self.add_row(col, pivot, self.rows[col][col].ring().one());
            self.add_row(pivot, col, self.rows[col][col].ring().one().neg());
        }
        let d = self.rows[col][col]
            .inv()
            .ok_or_else(|| Error::DeterminantNotOne(format!("pivot {} is not a unit", self.rows[col][col])))?;
        for r in 0..self.n {
            if r != col && !self.rows[r][col].is_zero() {
                let f = self.rows[r][col].mul(&d).neg();
                self.add_row(r, col, f);
            }
        }
        Ok(())
    }
}

/// The six factors of `h_a(u) = w_a(u) w_a(-1)`.
pub fn torus_factors(root: RootA, u: &Poly) -> Result<Vec<ElementaryFactor>> {
    let inv = u.inv().ok_or_else(|| Error::NotInvertible(u.to_string()))?;
    let one = u.ring().one();
    Ok(vec![
        ElementaryFactor::new(root, u.clone()),
        ElementaryFactor::new(root.neg(), inv.neg()),
        ElementaryFactor::new(root, u.clone()),
        ElementaryFactor::new(root, one.neg()),
        ElementaryFactor::new(root.neg(), one.clone()),
        ElementaryFactor::new(root, one.neg()),
    ])
}

/// Factors `m` as a product of elementary matrices over a field or `k[T]`.
pub fn factor_elementary(m: &GroupMatrix) -> Result<Vec<ElementaryFactor>> {
    let ring = m.ring();
    if ring.nvars() > 1 {
        return Err(Error::UnsupportedRing(format!(
            "elementary factorization needs a field or k[T], got {}",
            ring.descriptor()
        )));
    }
    let det = m.determinant();
    if !det.is_one() {
        return Err(Error::DeterminantNotOne(det.to_string()));
    }
    let n = m.n();
    let mut work = Elimination {
        n,
        rows: m.rows(),
        ops: Vec::new(),
    };
    for col in 0..n {
        work.reduce_column(col)?;
    }
    // L_K ... L_1 M = D, so M = L_1^{-1} ... L_K^{-1} D
    let mut factors: Vec<ElementaryFactor> = work
        .ops
        .into_iter()
        .map(|f| ElementaryFactor::new(f.root, f.param.neg()))
        .collect();
    let mut prefix = ring.one();
    for i in 0..n.saturating_sub(1) {
        prefix = prefix.mul(&work.rows[i][i]);
        if !prefix.is_one() {
            factors.extend(torus_factors(RootA::new(i + 1, i + 2)?, &prefix)?);
        }
    }
    Ok(factors)
}

/// `prod_i x_{a_i}(T u_i)` for a word over a field.
pub fn word_to_path(word: &SteinbergWord) -> Result<PathMatrix> {
    let ring = word.ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(format!(
            "word_to_path needs a word over a field, got {}",
            ring.descriptor()
        )));
    }
    let letters: Vec<_> = word
        .letters()
        .iter()
        .map(|l| (l.root, l.param.as_constant().expect("field element")))
        .collect();
    PathMatrix::from_letters(ring.base(), word.n(), &letters)
}

/// Factors a path `y` with `y(0) = I` as `prod x_{a_i}(f_i(T))` and returns
/// `prod x~_{a_i}(f_i(1))`.
pub fn path_to_steinberg(path: &PathMatrix) -> Result<SteinbergWord> {
    if !path.is_path() {
        return Err(Error::Precondition("path must start at the identity".into()));
    }
    let field: BaseField = path.field();
    let target = Ring::field(field);
    let one = field.one();
    let letters = factor_elementary(path.matrix())?
        .into_iter()
        .map(|f| Ok(Letter::new(f.root, target.constant(f.param.eval_at(&one)?))))
        .collect::<Result<Vec<_>>>()?;
    SteinbergWord::new(&target, path.n(), letters)
}
