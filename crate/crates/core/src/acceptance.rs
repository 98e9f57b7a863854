//! The seeded acceptance sweep: nine criteria, each a batch of exact checks
//! with a wall-clock budget.
//!
//! Inputs are drawn sequentially from a ChaCha8 stream (one stream per
//! criterion), then checked through [`Exec`], so results do not depend on the
//! execution mode.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{random_poly, random_unit, BaseField, Poly, Ring, Scalar};
use crate::chevalley::{GroupMatrix, RootA};
use crate::exec::Exec;
use crate::factorization::{factor_elementary, multiply_factors, path_to_steinberg};
use crate::loops::{
    c_loop, difference_matrix, h_loop, path_ring, sl2_closed_form, verify_path_identity, w_loop, PathMatrix, PathProduct,
};
use crate::oracles::schur::{
    cyclic_torus_generator, klein_four_generators, schur_multiplier_with, sl2_f3_generators,
};
use crate::oracles::{milnor_k2_finite_field, tame_symbol};
use crate::simplicial::{simplex_ring, verify_homotopy_witness, SimplexMatrix, SimplexPoly};
use crate::steinberg::{symbol_word, tame_invariants, K2Candidate, SteinbergWord, SymbolFactor};

pub const DEFAULT_SEED: u64 = 1729;

/// Per-group budget for the Schur-multiplier sweep.
pub const SCHUR_GROUP_LIMIT: Duration = Duration::from_secs(60);

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    /// All checks held.
    pub holds: bool,
    pub checks: usize,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionOutcome {
    pub fn within_limit(&self) -> bool {
        self.elapsed <= self.limit
    }

    pub fn passed(&self) -> bool {
        self.holds && self.within_limit()
    }

    /// One table line, e.g. `criterion 1 [PASS] sl2 closed form: 40 checks`.
    pub fn line(&self, with_timing: bool) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {} [{status}] {}: {}", self.id, self.name, self.detail);
        if with_timing || !self.within_limit() {
            s.push_str(&format!(" ({:.3}s, limit {}s)", self.elapsed.as_secs_f64(), self.limit.as_secs()));
        }
        s
    }

    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut v = json!({
            "criterion": self.id,
            "name": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "detail": self.detail,
        });
        if with_timing {
            v["seconds"] = json!(self.elapsed.as_secs_f64());
            v["limit_seconds"] = json!(self.limit.as_secs());
        }
        v
    }
}

type Check = std::result::Result<usize, String>;

pub const CRITERIA: [(u8, &str, u64); 9] = [
    (1, "sl2 closed form", 1),
    (2, "loop contract", 5),
    (3, "path identities", 1),
    (4, "factorization soundness", 30),
    (5, "simplicial identities", 2),
    (6, "tame symbols", 2),
    (7, "milnor k2 of finite fields", 10),
    (8, "schur multipliers", 60 * 16),
    (9, "steinberg words", 5),
];

pub fn run_all(seed: u64, exec: Exec) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&(id, _, _)| run_criterion(id, seed, exec)).collect()
}

/// Runs one criterion. Panics on an id outside `1..=9`.
pub fn run_criterion(id: u8, seed: u64, exec: Exec) -> CriterionOutcome {
    let &(_, name, limit) = CRITERIA.iter().find(|c| c.0 == id).expect("criterion id in 1..=9");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let start = Instant::now();
    let result = match id {
        1 => sl2_closed_form_sweep(&mut rng, exec),
        2 => loop_contract(&mut rng, exec),
        3 => path_identities(&mut rng, exec),
        4 => factorization_soundness(&mut rng, exec),
        5 => simplicial_identities(&mut rng, exec),
        6 => tame_symbols(&mut rng, exec),
        7 => milnor_fields(),
        8 => schur_sweep(exec),
        _ => steinberg_words(&mut rng, exec),
    };
    let elapsed = start.elapsed();
    let (holds, checks, detail) = match result {
        Ok(checks) => (true, checks, format!("{checks} checks")),
        Err(e) => (false, 0, e),
    };
    CriterionOutcome {
        id,
        name,
        holds,
        checks,
        detail,
        elapsed,
        limit: Duration::from_secs(limit),
    }
}

/// Runs `check` over `inputs`, summing check counts or returning the first failure.
fn sweep<T: Sync>(exec: Exec, inputs: &[T], check: impl Fn(&T) -> Check + Sync + Send) -> Check {
    exec.map_slice(inputs, check).into_iter().sum()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn q() -> BaseField {
    BaseField::Rationals
}

fn f(order: u64) -> BaseField {
    BaseField::finite(order).expect("tabulated order")
}

fn format_rows(rows: &[Vec<Poly>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn sl2_closed_form_sweep(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let mut inputs = Vec::new();
    for field in [q(), f(101)] {
        for _ in 0..20 {
            inputs.push((random_unit(rng, field, 30), random_unit(rng, field, 30)));
        }
    }
    let root = RootA::new(1, 2).unwrap();
    sweep(exec, &inputs, |(u, v)| {
        let definitional = c_loop(2, root, u, v).map_err(err)?;
        let closed = sl2_closed_form(u, v).map_err(err)?;
        ensure(definitional == closed, || {
            format!(
                "closed form differs at (u, v) = ({u}, {v}); difference {}",
                format_rows(&difference_matrix(definitional.matrix(), closed.matrix()))
            )
        })?;
        Ok(1)
    })
}

fn loop_contract(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let mut inputs = Vec::new();
    for n in 2..=4 {
        for root in RootA::all(n) {
            for field in [q(), f(7)] {
                for _ in 0..50 {
                    inputs.push((n, root, random_unit(rng, field, 20), random_unit(rng, field, 20)));
                }
            }
        }
    }
    sweep(exec, &inputs, |(n, root, a, b)| {
        let c = c_loop(*n, *root, a, b).map_err(err)?;
        ensure(c.is_loop(), || format!("c_loop({root:?}, {a}, {b}) in SL_{n} is not a loop"))?;
        if a.is_one() {
            return Ok(1);
        }
        let h = h_loop(*n, *root, a).map_err(err)?;
        let (start, end) = h.endpoints();
        let target = GroupMatrix::torus(*root, &Ring::field(a.field()).constant(a.clone()), *n).map_err(err)?;
        ensure(start.is_identity() && !h.is_loop() && end == target, || {
            format!("h_loop({root:?}, {a}) in SL_{n} does not run from I to h(u)")
        })?;
        Ok(2)
    })
}

fn path_identities(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let mut inputs = Vec::new();
    for field in [q(), f(7), f(9)] {
        for n in 2..=3 {
            for root in RootA::all(n) {
                inputs.push((n, root, random_unit(rng, field, 20)));
            }
        }
    }
    let mut checks = sweep(exec, &inputs, |(n, root, u)| {
        let field = u.field();
        let lhs = PathProduct::new(field, *n)
            .times(w_loop(*n, *root, u).map_err(err)?)
            .and_then(|p| p.times(w_loop(*n, *root, &u.neg())?))
            .map_err(err)?;
        let cert = verify_path_identity(&lhs, &PathProduct::new(field, *n)).map_err(err)?;
        ensure(cert.holds, || format!("W({u}) W({}) != I for {root:?} in SL_{n}", u.neg()))?;
        let constant = Ring::field(field);
        let w = GroupMatrix::weyl(*root, &constant.constant(u.clone()), *n).map_err(err)?;
        let w_neg = GroupMatrix::weyl(*root, &constant.constant(u.neg()), *n).map_err(err)?;
        ensure(w.inverse() == w_neg, || format!("w({u})^-1 != w(-u) for {root:?}"))?;
        Ok(2)
    })?;
    // H(2) H(3) = H(3) H(2) must be refuted with a certificate
    let root = RootA::new(1, 2).unwrap();
    let (a, b) = (Scalar::rational(2, 1), Scalar::rational(3, 1));
    let prod = |x: &Scalar, y: &Scalar| -> crate::Result<PathProduct> {
        PathProduct::new(q(), 2).times(h_loop(2, root, x)?)?.times(h_loop(2, root, y)?)
    };
    let cert = verify_path_identity(&prod(&a, &b).map_err(err)?, &prod(&b, &a).map_err(err)?).map_err(err)?;
    ensure(!cert.holds && cert.difference.is_some(), || {
        "H(2)H(3) = H(3)H(2) was not refuted".to_string()
    })?;
    checks += 1;
    Ok(checks)
}

struct FactorCase {
    n: usize,
    factors: Vec<(RootA, Poly)>,
    loop_case: bool,
}

fn factorization_soundness(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let mut inputs = Vec::new();
    for field in [f(7), q()] {
        let ring = path_ring(field);
        let t = ring.var(0);
        let t_minus_one = t.sub(&ring.one());
        let roots = RootA::all(3);
        for k in 0..100 {
            let loop_case = k < 30;
            let count = rng.gen_range(1..=12);
            let factors = (0..count)
                .map(|_| {
                    let root = roots[rng.gen_range(0..roots.len())];
                    let mut g = random_poly(rng, &ring, 2, 1);
                    if g.is_zero() {
                        g = ring.one();
                    }
                    let param = if loop_case { t.mul(&t_minus_one).mul(&g) } else { t.mul(&g) };
                    (root, param)
                })
                .collect();
            inputs.push(FactorCase { n: 3, factors, loop_case });
        }
    }
    let checks = sweep(exec, &inputs, |case| {
        let ring = case.factors[0].1.ring().clone();
        let m = GroupMatrix::from_elementaries(&ring, case.n, case.factors.iter().map(|(r, p)| (*r, p)))
            .map_err(err)?;
        let factors = factor_elementary(&m).map_err(err)?;
        ensure(multiply_factors(&ring, case.n, &factors).map_err(err)? == m, || {
            format!("factorization of {m} does not re-multiply")
        })?;
        let path = PathMatrix::new(m).map_err(err)?;
        let word = path_to_steinberg(&path).map_err(err)?;
        let end = path.eval(&ring.base().one()).map_err(err)?;
        ensure(word.project() == end, || "project(path_to_steinberg(y)) != y(1)".to_string())?;
        if path.is_loop() {
            ensure(word.in_k2(), || "lift of a loop is not in K2".to_string())?;
        } else {
            ensure(!case.loop_case, || "loop case is not a loop".to_string())?;
        }
        Ok(if case.loop_case { 3 } else { 2 })
    })?;
    Ok(checks)
}

/// Checks every simplicial identity applicable to `f`.
fn simplicial_checks(f: &SimplexPoly) -> Check {
    let n = f.level();
    let mut count = 0;
    let mismatch = |what: String| move || format!("{what} fails at level {n}");
    let face = |g: &SimplexPoly, i| g.face(i).map_err(err);
    let dgn = |g: &SimplexPoly, i| g.degeneracy(i).map_err(err);
    for j in 0..=n {
        for i in 0..j {
            if n >= 2 {
                // d_i d_j = d_{j-1} d_i
                ensure(face(&face(f, j)?, i)? == face(&face(f, i)?, j - 1)?, mismatch(format!("d{i} d{j}")))?;
                count += 1;
            }
        }
        let sj = dgn(f, j)?;
        for i in 0..=n + 1 {
            let lhs = face(&sj, i)?;
            let rhs = if i < j {
                dgn(&face(f, i)?, j - 1)?
            } else if i == j || i == j + 1 {
                f.clone()
            } else {
                dgn(&face(f, i - 1)?, j)?
            };
            ensure(lhs == rhs, mismatch(format!("d{i} s{j}")))?;
            count += 1;
        }
        for i in 0..=j {
            // s_i s_j = s_{j+1} s_i
            ensure(dgn(&sj, i)? == dgn(&dgn(f, i)?, j + 1)?, mismatch(format!("s{i} s{j}")))?;
            count += 1;
        }
    }
    Ok(count)
}

fn simplicial_identities(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let inputs: Vec<SimplexPoly> = (0..200)
        .map(|k| {
            let level = k % 5;
            let field = if k % 2 == 0 { q() } else { f(7) };
            SimplexPoly::new(level, random_poly(rng, &simplex_ring(field, level), 4, 2)).unwrap()
        })
        .collect();
    let checks = sweep(exec, &inputs, simplicial_checks)?;
    // sigma = e12(X1 X2) contracts e12(T - T^2)
    let r2 = simplex_ring(q(), 2);
    let root = RootA::new(1, 2).unwrap();
    let sigma = SimplexMatrix::new(2, GroupMatrix::elementary(root, &r2.var(0).mul(&r2.var(1)), 2).map_err(err)?)
        .map_err(err)?;
    let t_ring = path_ring(q());
    let t = t_ring.var(0);
    let target = PathMatrix::new(GroupMatrix::elementary(root, &t.sub(&t.mul(&t)), 2).map_err(err)?).map_err(err)?;
    let cert = verify_homotopy_witness(&sigma, &PathMatrix::constant_identity(q(), 2), &target).map_err(err)?;
    ensure(cert.certified, || "e12(X1 X2) does not certify e12(T - T^2) ~ I".to_string())?;
    Ok(checks + 1)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(1..=2000) * if rng.gen_bool(0.5) { 1 } else { -1 };
    BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=2000i64)))
}

fn relevant_primes(xs: &[&BigRational]) -> std::result::Result<Vec<u64>, String> {
    let mut primes = std::collections::BTreeSet::from([3u64, 5, 7]);
    for x in xs {
        primes.extend(crate::oracles::tame::primes_dividing(x.numer()).map_err(err)?);
        primes.extend(crate::oracles::tame::primes_dividing(x.denom()).map_err(err)?);
    }
    Ok(primes.into_iter().collect())
}

fn tame_symbols(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let triples: Vec<[BigRational; 3]> = (0..500)
        .map(|_| [random_rational(rng), random_rational(rng), random_rational(rng)])
        .collect();
    let mut checks = sweep(exec, &triples, |[a, b, c]| {
        let mut count = 0;
        let ab = a * b;
        for p in relevant_primes(&[a, b, c])? {
            let t = |x: &BigRational, y: &BigRational| tame_symbol(x, y, p).map_err(err);
            let prod = (t(a, c)? as u128 * t(b, c)? as u128 % p as u128) as u64;
            ensure(t(&ab, c)? == prod, || format!("bilinearity fails for ({a}, {b}, {c}) at {p}"))?;
            let anti = (t(a, b)? as u128 * t(b, a)? as u128 % p as u128) as u64;
            ensure(anti == 1, || format!("antisymmetry fails for ({a}, {b}) at {p}"))?;
            count += 2;
        }
        Ok(count)
    })?;
    let primes: Vec<u64> = (2..=97).filter(|&p| crate::arith::finite_field::is_prime(p)).collect();
    for u in 2..=50i64 {
        let (a, b) = (BigRational::from_integer(u.into()), BigRational::from_integer((1 - u).into()));
        for &p in &primes {
            ensure(tame_symbol(&a, &b, p).map_err(err)? == 1, || format!("tau_{p}({{{u}, {}}}) != 1", 1 - u))?;
            checks += 1;
        }
    }
    let (two, three) = (BigRational::from_integer(2.into()), BigRational::from_integer(3.into()));
    ensure(tame_symbol(&two, &three, 3).map_err(err)? == 2, || "tau_3({2, 3}) != 2".to_string())?;
    let invariants = tame_invariants(&K2Candidate::Symbols(vec![SymbolFactor::new(two, three)])).map_err(err)?;
    ensure(invariants.get(&3) == Some(&2), || "tame invariants of {2, 3} miss tau_3 = 2".to_string())?;
    // the corresponding symbol loop over Q is a genuine loop
    let root = RootA::new(1, 2).unwrap();
    let c = c_loop(3, root, &Scalar::rational(2, 1), &Scalar::rational(3, 1)).map_err(err)?;
    ensure(c.is_loop(), || "C(2, 3) is not a loop".to_string())?;
    Ok(checks + 3)
}

fn milnor_fields() -> Check {
    let mut checks = 0;
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13] {
        let p = milnor_k2_finite_field(q).map_err(err)?;
        ensure(p.invariants.is_trivial(), || {
            format!("K2 of F_{q} came out as {:?}", p.invariants)
        })?;
        checks += 1;
    }
    Ok(checks)
}

fn schur_sweep(exec: Exec) -> Check {
    let mut groups: Vec<(String, Vec<GroupMatrix>, Option<u64>)> = Vec::new();
    for n in (1..=12).chain([30]) {
        groups.push((format!("C{n}"), vec![cyclic_torus_generator(n).map_err(err)?], None));
    }
    groups.push(("SL2(F3)".into(), sl2_f3_generators().map_err(err)?, None));
    groups.push(("V4".into(), klein_four_generators().map_err(err)?, Some(2)));
    let mut checks = 0;
    for (name, gens, expected) in &groups {
        let start = Instant::now();
        let h = schur_multiplier_with(gens, 200, exec).map_err(err)?;
        let elapsed = start.elapsed();
        ensure(h.boundary_check, || format!("{name}: d2 d3 != 0"))?;
        ensure(h.modular_check, || format!("{name}: modular rank check failed"))?;
        let ok = match expected {
            None => h.h2.is_trivial(),
            Some(n) => h.h2.is_cyclic_of_order(*n),
        };
        ensure(ok, || format!("{name}: H2 came out as {:?}", h.h2))?;
        ensure(elapsed <= SCHUR_GROUP_LIMIT, || format!("{name} took {elapsed:?}"))?;
        if name == "SL2(F3)" {
            ensure(h.order == 24, || format!("SL2(F3) has order {}", h.order))?;
        }
        checks += 1;
    }
    Ok(checks)
}

fn random_word(rng: &mut ChaCha8Rng, field: BaseField, n: usize) -> SteinbergWord {
    let roots = RootA::all(n);
    let letters: Vec<(RootA, Scalar)> = (0..rng.gen_range(0..=8))
        .map(|_| (roots[rng.gen_range(0..roots.len())], random_unit(rng, field, 9)))
        .collect();
    SteinbergWord::from_scalars(field, n, &letters).unwrap()
}

fn steinberg_words(rng: &mut ChaCha8Rng, exec: Exec) -> Check {
    let mut checks = 0;
    for field in [q(), f(5)] {
        for root in RootA::all(3) {
            let v = random_unit(rng, field, 9);
            let w = symbol_word(3, root, &field.one(), &v).map_err(err)?;
            ensure(w.is_empty(), || format!("symbol_word({root:?}, 1, {v}) is not empty"))?;
            checks += 1;
        }
    }
    let mut pairs = Vec::new();
    for field in [q(), f(5)] {
        let roots = RootA::all(3);
        for _ in 0..50 {
            let root = roots[rng.gen_range(0..roots.len())];
            pairs.push((root, random_unit(rng, field, 20), random_unit(rng, field, 20)));
        }
    }
    checks += sweep(exec, &pairs, |(root, u, v)| {
        let w = symbol_word(3, *root, u, v).map_err(err)?;
        ensure(w.in_k2(), || format!("symbol_word({root:?}, {u}, {v}) is not in K2"))?;
        Ok(1)
    })?;
    let words: Vec<(SteinbergWord, SteinbergWord)> = (0..200)
        .map(|k| {
            let field = if k % 2 == 0 { f(5) } else { q() };
            (random_word(rng, field, 3), random_word(rng, field, 3))
        })
        .collect();
    checks += sweep(exec, &words, |(a, b)| {
        let ab = a.mul(b).map_err(err)?;
        ensure(ab.project() == a.project().mul(&b.project()), || {
            "project is not multiplicative".to_string()
        })?;
        Ok(1)
    })?;
    Ok(checks)
}
