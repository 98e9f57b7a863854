//! JSON documents exchanged by the command-line tool.
//!
//! Every document carries a top-level `"schema"` key. Field elements are
//! encoded as decimal strings over Q (`"3"`, `"-1/2"`) and as coefficient
//! arrays over `F_q` (`[2]`, `[1, 2]`). Polynomials are lists of
//! `[exponents, coefficient]` pairs in lexicographic order; over a field the
//! bare scalar encoding is used instead.
//!
//! Objects are emitted with sorted keys, so output is byte-for-byte
//! deterministic.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{BaseField, Monomial, Poly, Ring, Scalar};
use crate::chevalley::{GroupMatrix, RootA};
use crate::error::{Error, Result};
use crate::factorization::ElementaryFactor;
use crate::loops::PathMatrix;
use crate::oracles::{AbelianGroupPresentation, AbelianInvariants};
use crate::simplicial::{simplex_ring, SimplexMatrix, SimplexPoly};
use crate::steinberg::{Letter, SteinbergWord};

pub const MATRIX_SCHEMA: &str = "symloop.matrix/1";
pub const PATH_SCHEMA: &str = "symloop.path/1";
pub const WORD_SCHEMA: &str = "symloop.word/1";
pub const SIMPLEX_SCHEMA: &str = "symloop.simplex/1";
pub const PRESENTATION_SCHEMA: &str = "symloop.presentation/1";
pub const FACTORS_SCHEMA: &str = "symloop.factors/1";
pub const GENERATORS_SCHEMA: &str = "symloop.generators/1";

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn encode_scalar(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(_) => Value::String(s.to_string()),
        Scalar::Finite(x) => Value::Array(x.coeffs().iter().map(|&c| json!(c)).collect()),
    }
}

pub fn decode_scalar(field: BaseField, v: &Value) -> Result<Scalar> {
    match (field, v) {
        (_, Value::String(s)) => field.parse_scalar(s),
        (_, Value::Number(n)) => field.parse_scalar(&n.to_string()),
        (BaseField::Finite(f), Value::Array(items)) => {
            let coeffs = items
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| parse_err(format!("bad F_q coefficient {c}"))))
                .collect::<Result<Vec<_>>>()?;
            f.from_coeffs(&coeffs).map(Scalar::Finite)
        }
        _ => Err(parse_err(format!("expected an element of {}, got {v}", field.descriptor()))),
    }
}

/// Scalar encoding over a field, term list otherwise.
pub fn encode_element(p: &Poly) -> Value {
    if p.ring().is_field() {
        return encode_scalar(&p.as_constant().expect("field element"));
    }
    Value::Array(
        p.terms()
            .map(|(m, c)| json!([m.iter().collect::<Vec<_>>(), encode_scalar(c)]))
            .collect(),
    )
}

fn is_scalar_value(v: &Value) -> bool {
    match v {
        Value::String(_) | Value::Number(_) => true,
        Value::Array(items) => !items.is_empty() && items.iter().all(Value::is_number),
        _ => false,
    }
}

/// Accepts a term list, or a scalar for a constant.
pub fn decode_element(ring: &Ring, v: &Value) -> Result<Poly> {
    if is_scalar_value(v) {
        return Ok(ring.constant(decode_scalar(ring.base(), v)?));
    }
    let terms = v
        .as_array()
        .ok_or_else(|| parse_err(format!("expected a polynomial, got {v}")))?;
    let mut out = ring.zero();
    for t in terms {
        let pair = t
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| parse_err(format!("expected [exponents, coefficient], got {t}")))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| parse_err(format!("expected an exponent list, got {}", pair[0])))?;
        if exps.len() != ring.nvars() {
            return Err(parse_err(format!(
                "{} exponents for the {} variables of {}",
                exps.len(),
                ring.nvars(),
                ring.descriptor()
            )));
        }
        let m: Monomial = exps
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| parse_err(format!("bad exponent {e}")))
            })
            .collect::<Result<_>>()?;
        let c = decode_scalar(ring.base(), &pair[1])?;
        out = out.add(&Poly::from_terms(ring.clone(), [(m, c)]));
    }
    Ok(out)
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| parse_err(format!("missing key {key:?}")))
}

fn usize_field(doc: &Value, key: &str) -> Result<usize> {
    field(doc, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| parse_err(format!("{key:?} must be a non-negative integer")))
}

fn str_field<'a>(doc: &'a Value, key: &str) -> Result<&'a str> {
    field(doc, key)?
        .as_str()
        .ok_or_else(|| parse_err(format!("{key:?} must be a string")))
}

fn array_field<'a>(doc: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(doc, key)?
        .as_array()
        .ok_or_else(|| parse_err(format!("{key:?} must be an array")))
}

/// Checks the schema key. Documents without one are accepted.
fn check_schema(doc: &Value, expected: &str) -> Result<()> {
    match doc.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == expected => Ok(()),
        Some(other) => Err(parse_err(format!("expected schema {expected:?}, got {other}"))),
    }
}

fn encode_entries(m: &GroupMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(encode_element).collect()))
            .collect(),
    )
}

fn decode_entries(ring: &Ring, n: usize, v: &Value) -> Result<GroupMatrix> {
    let rows = v.as_array().ok_or_else(|| parse_err("\"entries\" must be an array of rows"))?;
    if rows.len() != n {
        return Err(parse_err(format!("{} rows for n = {n}", rows.len())));
    }
    let rows = rows
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| parse_err("matrix row must be an array"))?;
            row.iter().map(|e| decode_element(ring, e)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GroupMatrix::from_rows(ring, rows)
}

pub fn matrix_to_json(m: &GroupMatrix) -> Value {
    json!({
        "schema": MATRIX_SCHEMA,
        "n": m.n(),
        "ring": m.ring().descriptor(),
        "entries": encode_entries(m),
    })
}

pub fn matrix_from_json(doc: &Value) -> Result<GroupMatrix> {
    check_schema(doc, MATRIX_SCHEMA)?;
    let ring = Ring::parse_descriptor(str_field(doc, "ring")?)?;
    decode_entries(&ring, usize_field(doc, "n")?, field(doc, "entries")?)
}

pub fn path_to_json(p: &PathMatrix) -> Value {
    json!({
        "schema": PATH_SCHEMA,
        "n": p.n(),
        "ring": p.matrix().ring().descriptor(),
        "entries": encode_entries(p.matrix()),
    })
}

/// Also accepts a matrix document over a univariate ring.
pub fn path_from_json(doc: &Value) -> Result<PathMatrix> {
    if doc.get("schema").and_then(Value::as_str) != Some(MATRIX_SCHEMA) {
        check_schema(doc, PATH_SCHEMA)?;
    }
    let ring = Ring::parse_descriptor(str_field(doc, "ring")?)?;
    PathMatrix::new(decode_entries(&ring, usize_field(doc, "n")?, field(doc, "entries")?)?)
}

pub fn word_to_json(w: &SteinbergWord) -> Value {
    json!({
        "schema": WORD_SCHEMA,
        "n": w.n(),
        "ring": w.ring().descriptor(),
        "letters": w
            .letters()
            .iter()
            .map(|l| json!([l.root.i(), l.root.j(), encode_element(&l.param), l.sign]))
            .collect::<Vec<_>>(),
    })
}

fn decode_root(i: &Value, j: &Value) -> Result<RootA> {
    let idx = |v: &Value| {
        v.as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| parse_err(format!("bad root index {v}")))
    };
    RootA::new(idx(i)?, idx(j)?)
}

pub fn word_from_json(doc: &Value) -> Result<SteinbergWord> {
    check_schema(doc, WORD_SCHEMA)?;
    let ring = Ring::parse_descriptor(str_field(doc, "ring")?)?;
    let n = usize_field(doc, "n")?;
    let letters = array_field(doc, "letters")?
        .iter()
        .map(|l| {
            let parts = l
                .as_array()
                .filter(|p| p.len() == 3 || p.len() == 4)
                .ok_or_else(|| parse_err(format!("letter must be [i, j, param, sign], got {l}")))?;
            let sign = match parts.get(3) {
                None => 1,
                Some(s) => s
                    .as_i64()
                    .filter(|s| *s == 1 || *s == -1)
                    .ok_or_else(|| parse_err(format!("letter sign must be 1 or -1, got {s}")))? as i8,
            };
            Ok(Letter {
                root: decode_root(&parts[0], &parts[1])?,
                param: decode_element(&ring, &parts[2])?,
                sign,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SteinbergWord::new(&ring, n, letters)
}

pub fn factors_to_json(ring: &Ring, n: usize, factors: &[ElementaryFactor]) -> Value {
    json!({
        "schema": FACTORS_SCHEMA,
        "n": n,
        "ring": ring.descriptor(),
        "factors": factors
            .iter()
            .map(|f| json!([f.root.i(), f.root.j(), encode_element(&f.param)]))
            .collect::<Vec<_>>(),
    })
}

/// A simplex document holds either `"poly"` or `"n"` and `"entries"`.
#[derive(Clone, Debug, PartialEq)]
pub enum Simplex {
    Poly(SimplexPoly),
    Matrix(SimplexMatrix),
}

impl Simplex {
    pub fn face(&self, i: usize) -> Result<Simplex> {
        Ok(match self {
            Simplex::Poly(p) => Simplex::Poly(p.face(i)?),
            Simplex::Matrix(m) => Simplex::Matrix(m.face(i)?),
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Simplex> {
        Ok(match self {
            Simplex::Poly(p) => Simplex::Poly(p.degeneracy(i)?),
            Simplex::Matrix(m) => Simplex::Matrix(m.degeneracy(i)?),
        })
    }
}

pub fn simplex_to_json(s: &Simplex) -> Value {
    match s {
        Simplex::Poly(p) => json!({
            "schema": SIMPLEX_SCHEMA,
            "level": p.level(),
            "field": p.field().descriptor(),
            "poly": encode_element(p.poly()),
        }),
        Simplex::Matrix(m) => json!({
            "schema": SIMPLEX_SCHEMA,
            "level": m.level(),
            "field": m.field().descriptor(),
            "n": m.matrix().n(),
            "entries": encode_entries(m.matrix()),
        }),
    }
}

pub fn simplex_from_json(doc: &Value) -> Result<Simplex> {
    check_schema(doc, SIMPLEX_SCHEMA)?;
    let level = usize_field(doc, "level")?;
    let field = BaseField::parse_descriptor(str_field(doc, "field")?)?;
    let ring = simplex_ring(field, level);
    match doc.get("poly") {
        Some(p) => Ok(Simplex::Poly(SimplexPoly::new(level, decode_element(&ring, p)?)?)),
        None => {
            let m = decode_entries(&ring, usize_field(doc, "n")?, field_or(doc, "entries")?)?;
            Ok(Simplex::Matrix(SimplexMatrix::new(level, m)?))
        }
    }
}

fn field_or<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key)
        .ok_or_else(|| parse_err(format!("simplex document needs \"poly\" or \"{key}\"")))
}

fn invariants_json(inv: &AbelianInvariants) -> (Value, Value) {
    (
        serde_json::to_value(inv).expect("serializable")["invariant_factors"].clone(),
        json!(inv.free_rank),
    )
}

pub fn presentation_to_json(p: &AbelianGroupPresentation) -> Value {
    let (factors, free_rank) = invariants_json(&p.invariants);
    let relations: Vec<Value> = (0..p.relations.nrows())
        .map(|r| Value::Array(p.relations.row(r).iter().map(|&(c, v)| json!([c, v])).collect()))
        .collect();
    json!({
        "schema": PRESENTATION_SCHEMA,
        "generators": p.generators,
        "relations": relations,
        "invariant_factors": factors,
        "free_rank": free_rank,
    })
}

/// Group generators for the Schur-multiplier oracle.
pub fn generators_to_json(gens: &[GroupMatrix]) -> Result<Value> {
    let first = gens.first().ok_or_else(|| Error::Precondition("no generators".into()))?;
    Ok(json!({
        "schema": GENERATORS_SCHEMA,
        "n": first.n(),
        "ring": first.ring().descriptor(),
        "matrices": gens.iter().map(encode_entries).collect::<Vec<_>>(),
    }))
}

pub fn generators_from_json(doc: &Value) -> Result<Vec<GroupMatrix>> {
    check_schema(doc, GENERATORS_SCHEMA)?;
    let ring = Ring::parse_descriptor(str_field(doc, "ring")?)?;
    let n = usize_field(doc, "n")?;
    array_field(doc, "matrices")?
        .iter()
        .map(|m| decode_entries(&ring, n, m))
        .collect()
}

/// Integers that fit in `u64` as numbers, larger ones as strings.
pub fn encode_integers(values: &[BigInt]) -> Value {
    Value::Array(
        values
            .iter()
            .map(|v| match u64::try_from(v) {
                Ok(x) => json!(x),
                Err(_) => json!(v.to_string()),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::random_poly;
    use crate::loops::c_loop;
    use crate::oracles::milnor_k2_finite_field;
    use crate::steinberg::symbol_word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalars() {
        let q = BaseField::Rationals;
        assert_eq!(encode_scalar(&Scalar::rational(-1, 2)), json!("-1/2"));
        assert_eq!(decode_scalar(q, &json!("-1/2")).unwrap(), Scalar::rational(-1, 2));
        assert_eq!(decode_scalar(q, &json!(4)).unwrap(), Scalar::rational(4, 1));
        let f9 = BaseField::finite(9).unwrap();
        let x = decode_scalar(f9, &json!([1, 2])).unwrap();
        assert_eq!(encode_scalar(&x), json!([1, 2]));
        assert!(decode_scalar(q, &json!([1])).is_err());
    }

    #[test]
    fn polynomials_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for desc in ["poly:Q:T", "poly:Fq:3^2:X1,X2", "Q", "Fq:7^1"] {
            let ring = Ring::parse_descriptor(desc).unwrap();
            for _ in 0..10 {
                let p = random_poly(&mut rng, &ring, 4, 3);
                assert_eq!(decode_element(&ring, &encode_element(&p)).unwrap(), p);
            }
        }
        let ring = Ring::parse_descriptor("poly:Q:T").unwrap();
        assert!(decode_element(&ring, &json!([[[1, 2], "1"]])).is_err());
        assert_eq!(decode_element(&ring, &json!("3")).unwrap(), ring.from_i64(3));
    }

    #[test]
    fn documents_round_trip() {
        let root = RootA::new(1, 2).unwrap();
        let (a, b) = (Scalar::rational(2, 1), Scalar::rational(3, 1));
        let path = c_loop(3, root, &a, &b).unwrap();
        let doc = path_to_json(&path);
        assert_eq!(doc["schema"], PATH_SCHEMA);
        assert_eq!(path_from_json(&doc).unwrap(), path);
        assert_eq!(matrix_from_json(&matrix_to_json(path.matrix())).unwrap(), *path.matrix());

        let w = symbol_word(3, root, &a, &b).unwrap();
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);

        let ring = simplex_ring(BaseField::Rationals, 2);
        let s = Simplex::Poly(SimplexPoly::new(2, ring.var(0).mul(&ring.var(1))).unwrap());
        assert_eq!(simplex_from_json(&simplex_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn wrong_schema_and_bad_determinant() {
        let w = word_to_json(&SteinbergWord::empty(&Ring::field(BaseField::Rationals), 3));
        assert!(matches!(matrix_from_json(&w), Err(Error::Parse(_))));
        let doc = json!({"schema": MATRIX_SCHEMA, "n": 2, "ring": "Q", "entries": [["2", "0"], ["0", "1"]]});
        assert!(matches!(matrix_from_json(&doc), Err(Error::DeterminantNotOne(_))));
    }

    #[test]
    fn presentation_document() {
        let doc = presentation_to_json(&milnor_k2_finite_field(2).unwrap());
        assert_eq!(doc["invariant_factors"], json!([]));
        assert_eq!(doc["free_rank"], json!(0));
        assert_eq!(doc["schema"], PRESENTATION_SCHEMA);
    }
}
