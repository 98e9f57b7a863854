//! Words in the Steinberg group `St(A_{n-1}, R)`.
//!
//! Words are kept in canonical form under free and additive reduction only:
//! adjacent letters on the same root are merged and zero letters dropped.
//! Commutator relations are never applied automatically; [`SteinbergWord::commute_at`]
//! applies one on request. Equality of words is therefore equality of
//! canonical forms, not equality in the Steinberg group.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::arith::{BaseField, Poly, Ring, Scalar};
use crate::chevalley::{GroupMatrix, RootA};
use crate::error::{Error, Result};
use crate::loops::{c_letters, inverse_letters};
use crate::oracles::tame::{primes_dividing, tame_symbol};

/// One generator `x~_root(param)^sign`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub root: RootA,
    pub param: Poly,
    pub sign: i8,
}

impl Letter {
    pub fn new(root: RootA, param: Poly) -> Self {
        Letter { root, param, sign: 1 }
    }

    /// Effective parameter: `x~(u)^{-1} = x~(-u)`.
    fn signed_param(&self) -> Poly {
        if self.sign < 0 {
            self.param.neg()
        } else {
            self.param.clone()
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SteinbergWord {
    n: usize,
    ring: Ring,
    letters: Vec<Letter>,
}

/// Canonical reduction with a stack; every letter ends up with sign `+1`.
pub fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for letter in letters {
        let param = letter.signed_param();
        if param.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some(top) if top.root == letter.root => {
                let merged = top.param.add(&param);
                if merged.is_zero() {
                    out.pop();
                } else {
                    top.param = merged;
                }
            }
            _ => out.push(Letter::new(letter.root, param)),
        }
    }
    out
}

/// Rewrites with the two reduction rules in an order chosen by `choose`,
/// which receives the number of redexes and returns the one to contract.
///
/// Terminates in the same canonical form as [`reduce_letters`].
pub fn reduce_in_order(letters: Vec<Letter>, mut choose: impl FnMut(usize) -> usize) -> Vec<Letter> {
    let mut word: Vec<Letter> = letters
        .into_iter()
        .map(|l| {
            let p = l.signed_param();
            Letter::new(l.root, p)
        })
        .collect();
    loop {
        // redex k < len: zero letter at k; redex len + k: merge k, k+1
        let mut redexes = Vec::new();
        for (k, l) in word.iter().enumerate() {
            if l.param.is_zero() {
                redexes.push(k);
            }
        }
        for k in 0..word.len().saturating_sub(1) {
            if word[k].root == word[k + 1].root {
                redexes.push(word.len() + k);
            }
        }
        if redexes.is_empty() {
            return word;
        }
        let pick = redexes[choose(redexes.len()) % redexes.len()];
        if pick < word.len() {
            word.remove(pick);
        } else {
            let k = pick - word.len();
            let next = word.remove(k + 1);
            word[k].param = word[k].param.add(&next.param);
        }
    }
}

impl SteinbergWord {
    /// Validates and canonically reduces a list of letters.
    pub fn new(ring: &Ring, n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n < 2 {
            return Err(Error::SizeMismatch(format!("Steinberg words need n >= 2, got {n}")));
        }
        for l in &letters {
            l.root.check(n)?;
            ring.ensure_same(l.param.ring())?;
            if l.sign != 1 && l.sign != -1 {
                return Err(Error::Parse(format!("letter sign {} is not +1 or -1", l.sign)));
            }
        }
        Ok(SteinbergWord {
            n,
            ring: ring.clone(),
            letters: reduce_letters(letters),
        })
    }

    pub fn empty(ring: &Ring, n: usize) -> Self {
        SteinbergWord {
            n,
            ring: ring.clone(),
            letters: Vec::new(),
        }
    }

    /// A word over the field `k` from scalar letters.
    pub fn from_scalars(field: BaseField, n: usize, letters: &[(RootA, Scalar)]) -> Result<Self> {
        let ring = Ring::field(field);
        let letters = letters
            .iter()
            .map(|(r, s)| {
                if s.field() != field {
                    return Err(Error::RingMismatch("letter from another field".into()));
                }
                Ok(Letter::new(*r, ring.constant(s.clone())))
            })
            .collect::<Result<Vec<_>>>()?;
        SteinbergWord::new(&ring, n, letters)
    }

    pub fn generator(root: RootA, param: &Poly, n: usize) -> Result<Self> {
        SteinbergWord::new(param.ring(), n, vec![Letter::new(root, param.clone())])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Rank-one (`n = 2`) words are allowed, but the Steinberg presentation
    /// modelled here is only the faithful one for `n >= 3`.
    pub fn presentation_modeled(&self) -> bool {
        self.n >= 3
    }

    fn ensure_compatible(&self, other: &SteinbergWord) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("St_{} vs St_{}", self.n, other.n)));
        }
        self.ring.ensure_same(&other.ring)
    }

    /// `st_mul`: concatenation followed by reduction.
    pub fn mul(&self, other: &SteinbergWord) -> Result<SteinbergWord> {
        self.ensure_compatible(other)?;
        Ok(SteinbergWord {
            n: self.n,
            ring: self.ring.clone(),
            letters: reduce_letters(self.letters.iter().chain(&other.letters).cloned()),
        })
    }

    /// `st_inv`: reversed letters with negated parameters.
    pub fn inverse(&self) -> SteinbergWord {
        SteinbergWord {
            n: self.n,
            ring: self.ring.clone(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(l.root, l.param.neg()))
                .collect(),
        }
    }

    /// Image in `E(SL_n, R)`.
    pub fn project(&self) -> GroupMatrix {
        GroupMatrix::from_elementaries(&self.ring, self.n, self.letters.iter().map(|l| (l.root, &l.param)))
            .expect("letters validated on construction")
    }

    /// Whether the word lies in `K_2 = ker(St -> E)`.
    pub fn in_k2(&self) -> bool {
        self.project().is_identity()
    }

    /// Applies the Chevalley commutator relation to letters `pos` and `pos + 1`:
    /// `x~_a(u) x~_b(v) = [x~_a(u), x~_b(v)] x~_b(v) x~_a(u)` with the
    /// commutator rewritten as a single root letter (or dropped), then reduces.
    pub fn commute_at(&self, pos: usize) -> Result<SteinbergWord> {
        if pos + 1 >= self.letters.len() {
            return Err(Error::IndexOutOfRange {
                index: pos,
                level: self.letters.len(),
            });
        }
        let a = &self.letters[pos];
        let b = &self.letters[pos + 1];
        let (x, y) = (a.root, b.root);
        if x == y.neg() {
            return Err(Error::Precondition(format!(
                "no commutator relation between opposite roots {x:?} and {y:?}"
            )));
        }
        let uv = a.param.mul(&b.param);
        let mut replacement = Vec::with_capacity(3);
        if x != y {
            if x.j() == y.i() {
                replacement.push(Letter::new(RootA::new(x.i(), y.j())?, uv));
            } else if x.i() == y.j() {
                replacement.push(Letter::new(RootA::new(y.i(), x.j())?, uv.neg()));
            }
        }
        replacement.push(b.clone());
        replacement.push(a.clone());
        let letters = self.letters[..pos]
            .iter()
            .cloned()
            .chain(replacement)
            .chain(self.letters[pos + 2..].iter().cloned());
        Ok(SteinbergWord {
            n: self.n,
            ring: self.ring.clone(),
            letters: reduce_letters(letters),
        })
    }
}

/// A word certified to lie in `K_2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct K2Element(SteinbergWord);

impl K2Element {
    pub fn word(&self) -> &SteinbergWord {
        &self.0
    }
}

impl TryFrom<SteinbergWord> for K2Element {
    type Error = Error;

    fn try_from(word: SteinbergWord) -> Result<Self> {
        if word.in_k2() {
            Ok(K2Element(word))
        } else {
            Err(Error::Precondition("projection is not the identity".into()))
        }
    }
}

/// `c~(u, v) = h~(u) h~(v) h~(uv)^{-1}` with the letters of the symbol loop at `T = 1`.
pub fn symbol_word(n: usize, root: RootA, u: &Scalar, v: &Scalar) -> Result<SteinbergWord> {
    if u.field() != v.field() {
        return Err(Error::RingMismatch("symbol arguments from different fields".into()));
    }
    root.check(n)?;
    SteinbergWord::from_scalars(u.field(), n, &c_letters(root, u, v)?)
}

pub fn in_k2(word: &SteinbergWord) -> bool {
    word.in_k2()
}

/// `{a, b}^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolFactor {
    pub a: BigRational,
    pub b: BigRational,
    pub exponent: i64,
}

impl SymbolFactor {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        SymbolFactor { a, b, exponent: 1 }
    }

    pub fn inverse(&self) -> Self {
        SymbolFactor {
            a: self.a.clone(),
            b: self.b.clone(),
            exponent: -self.exponent,
        }
    }
}

/// Input to [`tame_invariants`]: a product of symbols over Q, or an arbitrary
/// word (which is rejected).
#[derive(Clone, Debug)]
pub enum K2Candidate {
    Symbols(Vec<SymbolFactor>),
    Word(SteinbergWord),
}

/// Product of tame symbols at each prime dividing some symbol argument.
/// The result maps `p` to a value in `1..p`.
pub fn tame_invariants(candidate: &K2Candidate) -> Result<BTreeMap<u64, u64>> {
    let factors = match candidate {
        K2Candidate::Symbols(f) => f,
        K2Candidate::Word(_) => {
            return Err(Error::NotSymbolForm(
                "general K2 words cannot be decomposed into symbols".into(),
            ))
        }
    };
    let mut primes = std::collections::BTreeSet::new();
    for f in factors {
        for x in [&f.a, &f.b] {
            primes.extend(primes_dividing(x.numer())?);
            primes.extend(primes_dividing(x.denom())?);
        }
    }
    let mut out = BTreeMap::new();
    for p in primes {
        let mut acc: u64 = 1;
        for f in factors {
            let t = tame_symbol(&f.a, &f.b, p)?;
            let t = if f.exponent < 0 { mod_inverse(t, p) } else { t };
            for _ in 0..f.exponent.unsigned_abs() {
                acc = (acc as u128 * t as u128 % p as u128) as u64;
            }
        }
        out.insert(p, acc);
    }
    Ok(out)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of a symbol word is built letter-for-letter from [`inverse_letters`].
pub fn symbol_word_inverse(n: usize, root: RootA, u: &Scalar, v: &Scalar) -> Result<SteinbergWord> {
    SteinbergWord::from_scalars(u.field(), n, &inverse_letters(&c_letters(root, u, v)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{random_unit, BaseField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Ring {
        Ring::field(BaseField::Rationals)
    }

    fn root(i: usize, j: usize) -> RootA {
        RootA::new(i, j).unwrap()
    }

    fn word(ring: &Ring, n: usize, letters: &[(usize, usize, i64)]) -> SteinbergWord {
        let letters = letters
            .iter()
            .map(|&(i, j, u)| Letter::new(root(i, j), ring.from_i64(u)))
            .collect();
        SteinbergWord::new(ring, n, letters).unwrap()
    }

    fn sc(n: i64) -> Scalar {
        Scalar::rational(n, 1)
    }

    #[test]
    fn additive_cancellation() {
        let ring = q();
        let a = word(&ring, 3, &[(1, 2, 4)]);
        let b = word(&ring, 3, &[(1, 2, -4)]);
        assert!(a.mul(&b).unwrap().is_empty());
    }

    #[test]
    fn inverse_reverses() {
        let ring = q();
        let w = word(&ring, 3, &[(1, 2, 2), (2, 3, 5)]);
        assert_eq!(w.inverse(), word(&ring, 3, &[(2, 3, -5), (1, 2, -2)]));
    }

    #[test]
    fn signs_are_absorbed() {
        let ring = q();
        let letters = vec![
            Letter { root: root(1, 2), param: ring.from_i64(3), sign: -1 },
            Letter::new(root(1, 3), ring.from_i64(1)),
        ];
        let w = SteinbergWord::new(&ring, 3, letters).unwrap();
        assert_eq!(w, word(&ring, 3, &[(1, 2, -3), (1, 3, 1)]));
        let bad = vec![Letter { root: root(1, 2), param: ring.one(), sign: 2 }];
        assert!(SteinbergWord::new(&ring, 3, bad).is_err());
    }

    #[test]
    fn projection_examples() {
        let ring = q();
        assert!(SteinbergWord::empty(&ring, 3).project().is_identity());
        let p = word(&ring, 3, &[(1, 2, 2), (2, 3, 3)]).project();
        assert_eq!(p.entry(0, 2), &ring.from_i64(6));
    }

    #[test]
    fn commutator_residue_is_in_k2() {
        let ring = q();
        let (a, b) = (3, -7);
        let w = word(&ring, 3, &[(1, 2, a), (2, 3, b), (1, 2, -a), (2, 3, -b), (1, 3, -a * b)]);
        assert!(w.in_k2());
        assert!(!word(&ring, 3, &[(1, 2, 1)]).in_k2());
    }

    #[test]
    fn commute_at_preserves_projection() {
        let ring = q();
        let cases = [
            word(&ring, 4, &[(1, 2, 2), (2, 3, 3)]),
            word(&ring, 4, &[(2, 3, 2), (1, 2, 5)]),
            word(&ring, 4, &[(1, 2, 2), (3, 4, 3)]),
            word(&ring, 4, &[(1, 3, 2), (3, 4, -1), (4, 1, 6)]),
        ];
        for w in cases {
            let rewritten = w.commute_at(0).unwrap();
            assert_eq!(rewritten.project(), w.project());
        }
        let opposite = word(&ring, 3, &[(1, 2, 1), (2, 1, 1)]);
        assert!(matches!(opposite.commute_at(0), Err(Error::Precondition(_))));
        assert!(opposite.commute_at(1).is_err());
    }

    #[test]
    fn symbol_word_trivial_cases() {
        let r = root(1, 2);
        assert!(symbol_word(3, r, &sc(1), &sc(5)).unwrap().is_empty());
        let w = symbol_word(3, r, &sc(2), &sc(3)).unwrap();
        assert!(w.len() <= 18);
        assert!(w.in_k2());
        let half = Scalar::rational(1, 2);
        assert!(symbol_word(3, r, &sc(2), &half).unwrap().in_k2());
        let k2 = K2Element::try_from(w.clone()).unwrap();
        assert_eq!(k2.word(), &w);
        assert!(K2Element::try_from(word(&q(), 3, &[(1, 2, 1)])).is_err());
    }

    #[test]
    fn symbol_word_inverse_cancels() {
        let r = root(2, 3);
        let w = symbol_word(3, r, &sc(4), &sc(-3)).unwrap();
        let inv = symbol_word_inverse(3, r, &sc(4), &sc(-3)).unwrap();
        assert!(w.mul(&inv).unwrap().is_empty());
        assert_eq!(inv, w.inverse());
    }

    #[test]
    fn rank_one_flag() {
        assert!(!SteinbergWord::empty(&q(), 2).presentation_modeled());
        assert!(SteinbergWord::empty(&q(), 3).presentation_modeled());
    }

    #[test]
    fn reduction_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let field = BaseField::finite(5).unwrap();
        let ring = Ring::field(field);
        let roots = [root(1, 2), root(2, 3), root(1, 3)];
        for _ in 0..200 {
            let letters: Vec<Letter> = (0..rng.gen_range(0..14))
                .map(|_| Letter {
                    root: roots[rng.gen_range(0..2)],
                    param: ring.from_i64(rng.gen_range(0..5)),
                    sign: if rng.gen_bool(0.5) { 1 } else { -1 },
                })
                .collect();
            let canonical = reduce_letters(letters.clone());
            let shuffled = reduce_in_order(letters, |k| rng.gen_range(0..k));
            assert_eq!(canonical, shuffled);
        }
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let field = BaseField::finite(5).unwrap();
        let ring = Ring::field(field);
        let roots = RootA::all(3);
        let random_word = |rng: &mut ChaCha8Rng| {
            let letters = (0..rng.gen_range(0..8))
                .map(|_| Letter::new(roots[rng.gen_range(0..6)], ring.constant(random_unit(rng, field, 1))))
                .collect();
            SteinbergWord::new(&ring, 3, letters).unwrap()
        };
        for _ in 0..100 {
            let a = random_word(&mut rng);
            let b = random_word(&mut rng);
            assert_eq!(a.mul(&b).unwrap().project(), a.project().mul(&b.project()));
        }
    }

    #[test]
    fn tame_invariant_examples() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let inv = tame_invariants(&K2Candidate::Symbols(vec![SymbolFactor::new(r(2), r(3))])).unwrap();
        assert_eq!(inv.get(&3), Some(&2));
        let steinberg = tame_invariants(&K2Candidate::Symbols(vec![SymbolFactor::new(r(7), r(-6))])).unwrap();
        assert!(steinberg.values().all(|&v| v == 1));
        let f = SymbolFactor::new(r(4), r(9));
        let cancel = tame_invariants(&K2Candidate::Symbols(vec![f.clone(), f.inverse()])).unwrap();
        assert!(cancel.values().all(|&v| v == 1));
        let w = symbol_word(3, root(1, 2), &sc(2), &sc(3)).unwrap();
        assert!(matches!(
            tame_invariants(&K2Candidate::Word(w)),
            Err(Error::NotSymbolForm(_))
        ));
    }
}
