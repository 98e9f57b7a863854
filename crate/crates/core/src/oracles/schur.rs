//! Schur multipliers `H_2(G, Z)` of small finite matrix groups.
//!
//! The group is enumerated by breadth-first search from its generators; `H_2`
//! is read off the normalized bar complex in degrees 1 to 3 with trivial
//! coefficients. Boundaries are stored one row per cell, so `d2` is a
//! `C_2 x C_1` matrix and `d3` is `C_3 x C_2`, and the chain condition reads
//! `d3 * d2 = 0`.

use std::collections::HashMap;

use serde::Serialize;

use super::snf::{smith_normal_form, SparseIntMatrix};
use super::AbelianInvariants;
use crate::arith::{BaseField, FiniteField, Ring};
use crate::chevalley::{GroupMatrix, RootA};
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const DEFAULT_ORDER_BOUND: usize = 200;

/// A finite group of matrices with its multiplication table.
/// Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    elements: Vec<GroupMatrix>,
    table: Vec<u32>,
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupMatrix] {
        &self.elements
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }
}

/// Enumerates `<gens>`; fails once more than `bound` elements have been found.
pub fn enumerate_group(gens: &[GroupMatrix], bound: usize, exec: Exec) -> Result<FiniteMatrixGroup> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Precondition("at least one generator is required".into()))?;
    let (n, ring) = (first.n(), first.ring().clone());
    if !ring.is_field() || ring.base() == BaseField::Rationals {
        return Err(Error::UnsupportedRing(format!(
            "generators must be matrices over a finite field, got {}",
            ring.descriptor()
        )));
    }
    for g in gens {
        if g.n() != n {
            return Err(Error::SizeMismatch(format!("SL_{} generator among SL_{n}", g.n())));
        }
        ring.ensure_same(g.ring())?;
    }
    let identity = GroupMatrix::identity(&ring, n);
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<GroupMatrix, usize> = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in gens {
            let next = current.mul(g);
            if !index.contains_key(&next) {
                if elements.len() >= bound {
                    return Err(Error::OrderBoundExceeded {
                        bound,
                        partial: elements.len(),
                    });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
    }
    let order = elements.len();
    let rows = exec.map_range(order, |a| {
        (0..order)
            .map(|b| index[&elements[a].mul(&elements[b])] as u32)
            .collect::<Vec<u32>>()
    });
    Ok(FiniteMatrixGroup {
        elements,
        table: rows.concat(),
    })
}

/// Boundary matrices of the normalized bar complex in degrees 2 and 3.
pub struct BarBoundaries {
    /// `C_2 -> C_1`, one row per 2-cell.
    pub d2: SparseIntMatrix,
    /// `C_3 -> C_2`, one row per 3-cell.
    pub d3: SparseIntMatrix,
}

/// Builds the normalized bar boundaries. Cells are tuples of non-identity
/// elements, indexed in mixed radix `order - 1`.
pub fn bar_boundaries(group: &FiniteMatrixGroup, exec: Exec) -> BarBoundaries {
    let m = group.order() - 1;
    // element index e >= 1 is coordinate e - 1; the identity drops out
    let coord = |e: usize| if e == 0 { None } else { Some(e - 1) };
    let elem = |k: usize| k + 1;

    let d2_rows = exec.map_range(m * m, |cell| {
        let (g, h) = (elem(cell / m), elem(cell % m));
        let mut row = Vec::with_capacity(3);
        // d[g|h] = [h] - [gh] + [g]
        row.push((h - 1, 1));
        if let Some(gh) = coord(group.product(g, h)) {
            row.push((gh, -1));
        }
        row.push((g - 1, 1));
        row
    });
    let d3_rows = exec.map_range(m * m * m, |cell| {
        let (g, h, k) = (elem(cell / (m * m)), elem(cell / m % m), elem(cell % m));
        let two = |a: usize, b: usize| (a - 1) * m + (b - 1);
        let mut row = Vec::with_capacity(4);
        // d[g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]
        row.push((two(h, k), 1));
        if coord(group.product(g, h)).is_some() {
            row.push((two(group.product(g, h), k), -1));
        }
        if coord(group.product(h, k)).is_some() {
            row.push((two(g, group.product(h, k)), 1));
        }
        row.push((two(g, h), -1));
        row
    });
    BarBoundaries {
        d2: SparseIntMatrix::from_rows(m, d2_rows),
        d3: SparseIntMatrix::from_rows(m * m, d3_rows),
    }
}

/// Checks `d3 * d2 = 0` row by row.
pub fn boundary_squares_to_zero(b: &BarBoundaries, exec: Exec) -> bool {
    exec.all(b.d3.nrows(), |r| {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(c2, a) in b.d3.row(r) {
            for &(c1, v) in b.d2.row(c2) {
                *acc.entry(c1).or_insert(0) += a * v;
            }
        }
        acc.values().all(|&v| v == 0)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurMultiplier {
    pub order: usize,
    /// Ranks of the normalized chain groups `C_1, C_2, C_3`.
    pub chain_ranks: [usize; 3],
    pub boundary_rank_2: usize,
    pub boundary_rank_3: usize,
    /// `d2 o d3 = 0` held before any Smith form was computed.
    pub boundary_check: bool,
    /// The modular rank checks of both Smith forms passed.
    pub modular_check: bool,
    pub h2: AbelianInvariants,
}

/// `H_2(<gens>, Z)` with the default parallelism.
pub fn schur_multiplier(gens: &[GroupMatrix], order_bound: usize) -> Result<SchurMultiplier> {
    schur_multiplier_with(gens, order_bound, Exec::default())
}

pub fn schur_multiplier_with(gens: &[GroupMatrix], order_bound: usize, exec: Exec) -> Result<SchurMultiplier> {
    let group = enumerate_group(gens, order_bound, exec)?;
    Ok(schur_multiplier_of(&group, exec))
}

pub fn schur_multiplier_of(group: &FiniteMatrixGroup, exec: Exec) -> SchurMultiplier {
    let m = group.order() - 1;
    let bounds = bar_boundaries(group, exec);
    let boundary_check = boundary_squares_to_zero(&bounds, exec);
    let s2 = smith_normal_form(&bounds.d2);
    let s3 = smith_normal_form(&bounds.d3);
    let kernel_rank = m * m - s2.rank;
    SchurMultiplier {
        order: group.order(),
        chain_ranks: [m, m * m, m * m * m],
        boundary_rank_2: s2.rank,
        boundary_rank_3: s3.rank,
        boundary_check,
        modular_check: s2.modular_check && s3.modular_check,
        h2: AbelianInvariants {
            invariant_factors: s3.torsion(),
            free_rank: kernel_rank - s3.rank,
        },
    }
}

fn f_ring(q: u64) -> Result<Ring> {
    Ok(Ring::field(BaseField::Finite(FiniteField::of_order(q)?)))
}

/// A generator `diag(g, g^{-1})` of a cyclic group of the given order, over
/// the smallest prime field whose unit group contains one.
pub fn cyclic_torus_generator(order: u64) -> Result<GroupMatrix> {
    if order == 0 {
        return Err(Error::Precondition("cyclic group of order 0".into()));
    }
    let p = (2..)
        .map(|k| k * order + 1)
        .find(|&p| crate::arith::finite_field::is_prime(p))
        .unwrap();
    let ring = f_ring(p)?;
    let field = ring.base();
    let element = (1..p as i64)
        .map(|x| field.from_i64(x))
        .find(|x| {
            let one = field.one();
            x.pow(order as i64).unwrap() == one
                && (1..order).all(|d| order % d != 0 || x.pow(d as i64).unwrap() != one)
        })
        .expect("unit group is cyclic");
    let g = ring.constant(element);
    let ginv = g.inv().unwrap();
    GroupMatrix::from_rows(&ring, vec![vec![g, ring.zero()], vec![ring.zero(), ginv]])
}

/// `diag(-1, -1, 1)` and `diag(1, -1, -1)` in `SL_3(F_3)`.
pub fn klein_four_generators() -> Result<Vec<GroupMatrix>> {
    let ring = f_ring(3)?;
    let diag = |d: [i64; 3]| {
        let rows = (0..3)
            .map(|r| (0..3).map(|c| if r == c { ring.from_i64(d[r]) } else { ring.zero() }).collect())
            .collect();
        GroupMatrix::from_rows(&ring, rows)
    };
    Ok(vec![diag([-1, -1, 1])?, diag([1, -1, -1])?])
}

/// `e_12(1)` and `e_21(1)` generating `SL_2(F_3)`.
pub fn sl2_f3_generators() -> Result<Vec<GroupMatrix>> {
    let ring = f_ring(3)?;
    Ok(vec![
        GroupMatrix::elementary(RootA::new(1, 2)?, &ring.one(), 2)?,
        GroupMatrix::elementary(RootA::new(2, 1)?, &ring.one(), 2)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn cyclic_generators_have_the_right_order() {
        for n in 1..=12 {
            let g = cyclic_torus_generator(n).unwrap();
            let group = enumerate_group(&[g], 100, Exec::Sequential).unwrap();
            assert_eq!(group.order(), n as usize);
        }
    }

    #[test]
    fn sl2_f3_has_order_24() {
        let group = enumerate_group(&sl2_f3_generators().unwrap(), 100, Exec::Parallel).unwrap();
        assert_eq!(group.order(), 24);
        // identity row of the table
        assert!((0..24).all(|b| group.product(0, b) == b));
    }

    #[test]
    fn order_bound() {
        let gens = sl2_f3_generators().unwrap();
        assert_eq!(
            enumerate_group(&gens, 10, Exec::Sequential).unwrap_err(),
            Error::OrderBoundExceeded { bound: 10, partial: 10 }
        );
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(enumerate_group(&[], 10, Exec::Sequential).is_err());
        let q = Ring::field(BaseField::Rationals);
        let g = GroupMatrix::identity(&q, 2);
        assert!(matches!(
            enumerate_group(&[g], 10, Exec::Sequential),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn small_multipliers() {
        let c4 = schur_multiplier(&[cyclic_torus_generator(4).unwrap()], 50).unwrap();
        assert!(c4.boundary_check);
        assert!(c4.h2.is_trivial());
        let v4 = schur_multiplier(&klein_four_generators().unwrap(), 50).unwrap();
        assert_eq!(v4.order, 4);
        assert_eq!(v4.h2.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(v4.h2.free_rank, 0);
    }
}
