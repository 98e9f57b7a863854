//! Independent brute-force oracles: tame symbols on `K_2(Q)`, Milnor `K_2`
//! of small finite fields, and Schur multipliers of small matrix groups.

pub mod milnor;
pub mod schur;
pub mod snf;
pub mod tame;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

pub use milnor::milnor_k2_finite_field;
pub use schur::{schur_multiplier, SchurMultiplier, DEFAULT_ORDER_BOUND};
pub use snf::{smith_normal_form, SmithForm, SparseIntMatrix};
pub use tame::tame_symbol;

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k`
/// with `d_1 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    #[serde(serialize_with = "serialize_factors")]
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// True for the cyclic group of order `n` (n >= 2).
    pub fn is_cyclic_of_order(&self, n: u64) -> bool {
        self.free_rank == 0 && self.invariant_factors == [BigInt::from(n)]
    }
}

fn serialize_factors<S: Serializer>(factors: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(factors.len()))?;
    for f in factors {
        match f.to_u64() {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&f.to_string())?,
        }
    }
    seq.end()
}

/// An abelian group given by generators and relations (rows of `relations`).
#[derive(Clone, Debug)]
pub struct AbelianGroupPresentation {
    pub generators: Vec<String>,
    pub relations: SparseIntMatrix,
    pub invariants: AbelianInvariants,
}

impl AbelianGroupPresentation {
    /// Computes the invariants of `Z^generators / rowspace(relations)`.
    pub fn new(generators: Vec<String>, relations: SparseIntMatrix) -> Self {
        assert_eq!(generators.len(), relations.ncols(), "one column per generator");
        // the transpose presents the cokernel with relations as columns
        let smith = smith_normal_form(&relations.transpose());
        assert!(smith.modular_check, "modular rank check failed");
        AbelianGroupPresentation {
            invariants: AbelianInvariants {
                invariant_factors: smith.torsion(),
                free_rank: generators.len() - smith.rank,
            },
            generators,
            relations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_of_z_mod_six_plus_z() {
        // <a, b, c | 2a, 3a, 4b + 2c, 2b + c> is Z, generated by b
        let rel = SparseIntMatrix::from_dense(&[vec![2, 0, 0], vec![3, 0, 0], vec![0, 4, 2], vec![0, 2, 1]]);
        let p = AbelianGroupPresentation::new(vec!["a".into(), "b".into(), "c".into()], rel);
        assert_eq!(p.invariants.free_rank, 1);
        assert!(p.invariants.invariant_factors.is_empty());
        let rel = SparseIntMatrix::from_dense(&[vec![6, 0], vec![0, 0]]);
        let p = AbelianGroupPresentation::new(vec!["a".into(), "b".into()], rel);
        assert_eq!(p.invariants.free_rank, 1);
        assert_eq!(p.invariants.invariant_factors, vec![BigInt::from(6)]);
    }

    #[test]
    fn serializes_factors_as_numbers() {
        let inv = AbelianInvariants {
            invariant_factors: vec![BigInt::from(2), BigInt::from(4)],
            free_rank: 0,
        };
        assert_eq!(
            serde_json::to_string(&inv).unwrap(),
            r#"{"invariant_factors":[2,4],"free_rank":0}"#
        );
    }
}
