//! Milnor `K_2` of a finite field from its symbol presentation.
//!
//! Generators are the symbols `{u, v}` for `u, v` in `F_q^*`. Relations are
//! bilinearity in each slot and the Steinberg relation `{u, 1 - u} = 0`.

use super::snf::SparseIntMatrix;
use super::AbelianGroupPresentation;
use crate::arith::{FiniteField, Fq};
use crate::error::{Error, Result};

/// Largest field order with a tabulated construction.
pub const MAX_ORDER: u64 = 16;

pub fn milnor_k2_finite_field(q: u64) -> Result<AbelianGroupPresentation> {
    if q > MAX_ORDER {
        return Err(Error::UnsupportedField(format!("q = {q} exceeds {MAX_ORDER}")));
    }
    let field = FiniteField::of_order(q)?;
    let units = field.units();
    let m = units.len();
    let index = |x: &Fq| units.iter().position(|u| u == x).expect("unit");
    let gen = |a: usize, b: usize| a * m + b;

    let mut rows = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let ab = index(&units[a].mul(&units[b]));
            for c in 0..m {
                // {ab, c} - {a, c} - {b, c}
                rows.push(vec![(gen(ab, c), 1), (gen(a, c), -1), (gen(b, c), -1)]);
                // {c, ab} - {c, a} - {c, b}
                rows.push(vec![(gen(c, ab), 1), (gen(c, a), -1), (gen(c, b), -1)]);
            }
        }
    }
    for (a, u) in units.iter().enumerate() {
        let one_minus = field.one().sub(u);
        if one_minus.is_zero() {
            continue;
        }
        rows.push(vec![(gen(a, index(&one_minus)), 1)]);
    }
    let generators = (0..m * m)
        .map(|g| format!("{{{},{}}}", units[g / m], units[g % m]))
        .collect();
    Ok(AbelianGroupPresentation::new(
        generators,
        SparseIntMatrix::from_rows(m * m, rows),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_is_trivial() {
        // the only symbol {1,1} is killed by bilinearity
        let p = milnor_k2_finite_field(2).unwrap();
        assert_eq!(p.generators, vec!["{1,1}".to_string()]);
        assert!(p.invariants.is_trivial());
    }

    #[test]
    fn f4_collapses() {
        let p = milnor_k2_finite_field(4).unwrap();
        assert_eq!(p.generators.len(), 9);
        assert!(p.invariants.is_trivial());
    }

    #[test]
    fn bilinearity_alone_gives_the_tensor_square() {
        // without Steinberg relations: F_q^* (x) F_q^* = Z/(q-1)
        let field = FiniteField::of_order(7).unwrap();
        let units = field.units();
        let m = units.len();
        let full = milnor_k2_finite_field(7).unwrap();
        let bilinear_rows = 2 * m * m * m;
        let rows: Vec<Vec<(usize, i64)>> = (0..bilinear_rows).map(|r| full.relations.row(r).to_vec()).collect();
        let p = AbelianGroupPresentation::new(full.generators.clone(), SparseIntMatrix::from_rows(m * m, rows));
        assert!(p.invariants.is_cyclic_of_order(6));
    }

    #[test]
    fn unsupported_orders() {
        assert!(milnor_k2_finite_field(6).is_err());
        assert!(milnor_k2_finite_field(17).is_err());
    }
}
