//! The simplicial ring `k[Delta^n] = k[X_0, ..., X_n] / (sum X_i - 1)` and the
//! singular resolution `n -> SL_m(k[Delta^n])` in low degrees.
//!
//! Elements are stored in canonical coordinates `X_1, ..., X_n`, with
//! `X_0 = 1 - (X_1 + ... + X_n)` eliminated. At level 1 the coordinate `X_1`
//! is the path parameter `T`, so `d_1` is evaluation at `T = 0` and `d_0` is
//! evaluation at `T = 1`.
//!
//! The Moore complex is `N_n = ker d_1 ∩ ... ∩ ker d_n` with boundary `d_0`.

use crate::arith::{BaseField, Poly, Ring};
use crate::chevalley::GroupMatrix;
use crate::error::{Error, Result};
use crate::loops::{path_ring, PathMatrix};

/// `k[X_1, ..., X_n]`, the canonical coordinate ring of level `n`.
pub fn simplex_ring(field: BaseField, level: usize) -> Ring {
    Ring::new(field, (1..=level).map(|j| format!("X{j}")))
}

/// `k[X_0, ..., X_n]` before the relation is imposed.
pub fn full_ring(field: BaseField, level: usize) -> Ring {
    Ring::new(field, (0..=level).map(|j| format!("X{j}")))
}

/// `X_0 = 1 - (X_1 + ... + X_n)` in canonical coordinates.
fn x0(ring: &Ring) -> Poly {
    (0..ring.nvars()).fold(ring.one(), |acc, j| acc.sub(&ring.var(j)))
}

/// Image of the full coordinate `X_j` in canonical coordinates.
fn coordinate(ring: &Ring, j: usize) -> Poly {
    if j == 0 {
        x0(ring)
    } else {
        ring.var(j - 1)
    }
}

/// Images of `X_1, ..., X_n` under `d_i`, in level `n - 1` coordinates.
fn face_images(field: BaseField, level: usize, i: usize) -> Vec<Poly> {
    let target = simplex_ring(field, level - 1);
    (1..=level)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Less => coordinate(&target, j),
            std::cmp::Ordering::Equal => target.zero(),
            std::cmp::Ordering::Greater => coordinate(&target, j - 1),
        })
        .collect()
}

/// Images of `X_1, ..., X_n` under `s_i`, in level `n + 1` coordinates.
fn degeneracy_images(field: BaseField, level: usize, i: usize) -> Vec<Poly> {
    let target = simplex_ring(field, level + 1);
    (1..=level)
        .map(|j| match j.cmp(&i) {
            std::cmp::Ordering::Less => coordinate(&target, j),
            std::cmp::Ordering::Equal => coordinate(&target, j).add(&coordinate(&target, j + 1)),
            std::cmp::Ordering::Greater => coordinate(&target, j + 1),
        })
        .collect()
}

fn check_face(level: usize, i: usize) -> Result<()> {
    if level == 0 || i > level {
        return Err(Error::IndexOutOfRange { index: i, level });
    }
    Ok(())
}

fn check_degeneracy(level: usize, i: usize) -> Result<()> {
    if i > level {
        return Err(Error::IndexOutOfRange { index: i, level });
    }
    Ok(())
}

/// An element of `k[Delta^level]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimplexPoly {
    level: usize,
    poly: Poly,
}

impl SimplexPoly {
    /// Wraps a polynomial over [`simplex_ring`] of the given level.
    pub fn new(level: usize, poly: Poly) -> Result<Self> {
        simplex_ring(poly.ring().base(), level).ensure_same(poly.ring())?;
        Ok(SimplexPoly { level, poly })
    }

    /// Canonicalizes a polynomial in `X_0, ..., X_n` by eliminating `X_0`.
    pub fn from_full(level: usize, poly: &Poly) -> Result<Self> {
        let field = poly.ring().base();
        full_ring(field, level).ensure_same(poly.ring())?;
        let target = simplex_ring(field, level);
        let images: Vec<Poly> = (0..=level).map(|j| coordinate(&target, j)).collect();
        Ok(SimplexPoly {
            level,
            poly: poly.compose(&target, &images)?,
        })
    }

    /// The same element written over `k[X_0, ..., X_n]` (without `X_0`).
    pub fn to_full(&self) -> Poly {
        let full = full_ring(self.field(), self.level);
        let images: Vec<Poly> = (1..=self.level).map(|j| full.var(j)).collect();
        self.poly.compose(&full, &images).expect("same field")
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn field(&self) -> BaseField {
        self.poly.ring().base()
    }

    pub fn face(&self, i: usize) -> Result<SimplexPoly> {
        check_face(self.level, i)?;
        let images = face_images(self.field(), self.level, i);
        let target = simplex_ring(self.field(), self.level - 1);
        Ok(SimplexPoly {
            level: self.level - 1,
            poly: self.poly.compose(&target, &images)?,
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<SimplexPoly> {
        check_degeneracy(self.level, i)?;
        let images = degeneracy_images(self.field(), self.level, i);
        let target = simplex_ring(self.field(), self.level + 1);
        Ok(SimplexPoly {
            level: self.level + 1,
            poly: self.poly.compose(&target, &images)?,
        })
    }
}

/// An `n`-simplex of `Sing(SL_m)(k)`: a matrix over `k[Delta^n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexMatrix {
    level: usize,
    matrix: GroupMatrix,
}

impl SimplexMatrix {
    pub fn new(level: usize, matrix: GroupMatrix) -> Result<Self> {
        simplex_ring(matrix.ring().base(), level).ensure_same(matrix.ring())?;
        Ok(SimplexMatrix { level, matrix })
    }

    pub fn identity(field: BaseField, level: usize, m: usize) -> Self {
        SimplexMatrix {
            level,
            matrix: GroupMatrix::identity(&simplex_ring(field, level), m),
        }
    }

    /// Reads a path over `k[T]` as a 1-simplex with `T = X_1`.
    pub fn from_path(path: &PathMatrix) -> Self {
        let ring = simplex_ring(path.field(), 1);
        SimplexMatrix {
            level: 1,
            matrix: path.matrix().rename_into(&ring).expect("univariate"),
        }
    }

    /// Inverse of [`SimplexMatrix::from_path`].
    pub fn to_path(&self) -> Result<PathMatrix> {
        if self.level != 1 {
            return Err(Error::Precondition(format!("a path is a 1-simplex, got level {}", self.level)));
        }
        PathMatrix::new(self.matrix.rename_into(&path_ring(self.field()))?)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn matrix(&self) -> &GroupMatrix {
        &self.matrix
    }

    pub fn field(&self) -> BaseField {
        self.matrix.ring().base()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn mul(&self, other: &SimplexMatrix) -> Result<SimplexMatrix> {
        if self.level != other.level {
            return Err(Error::SizeMismatch(format!("levels {} and {}", self.level, other.level)));
        }
        Ok(SimplexMatrix {
            level: self.level,
            matrix: self.matrix.checked_mul(&other.matrix)?,
        })
    }

    pub fn inverse(&self) -> SimplexMatrix {
        SimplexMatrix {
            level: self.level,
            matrix: self.matrix.inverse(),
        }
    }

    pub fn face(&self, i: usize) -> Result<SimplexMatrix> {
        check_face(self.level, i)?;
        let images = face_images(self.field(), self.level, i);
        let target = simplex_ring(self.field(), self.level - 1);
        Ok(SimplexMatrix {
            level: self.level - 1,
            matrix: self.matrix.map_entries(&target, |p| p.compose(&target, &images))?,
        })
    }

    pub fn degeneracy(&self, i: usize) -> Result<SimplexMatrix> {
        check_degeneracy(self.level, i)?;
        let images = degeneracy_images(self.field(), self.level, i);
        let target = simplex_ring(self.field(), self.level + 1);
        Ok(SimplexMatrix {
            level: self.level + 1,
            matrix: self.matrix.map_entries(&target, |p| p.compose(&target, &images))?,
        })
    }
}

/// A level-1 simplex with both faces trivial.
pub fn moore_is_loop(g: &SimplexMatrix) -> bool {
    g.level == 1 && (0..=1).all(|i| g.face(i).map(|f| f.is_identity()).unwrap_or(false))
}

/// Outcome of [`verify_homotopy_witness`].
#[derive(Clone, Debug)]
pub struct HomotopyCertificate {
    pub certified: bool,
    /// `d_0 sigma`, `d_1 sigma`, `d_2 sigma` as 1-simplices.
    pub faces: [SimplexMatrix; 3],
    /// `l' l^{-1}`, the required value of `d_0 sigma`.
    pub expected_boundary: SimplexMatrix,
}

/// Checks that `sigma` lies in the Moore complex at level 2 and that its
/// boundary `d_0 sigma` equals `to * from^{-1}`, certifying `from ~ to`.
pub fn verify_homotopy_witness(
    sigma: &SimplexMatrix,
    from: &PathMatrix,
    to: &PathMatrix,
) -> Result<HomotopyCertificate> {
    if sigma.level != 2 {
        return Err(Error::Precondition(format!("witness must be a 2-simplex, got level {}", sigma.level)));
    }
    let (l, l2) = (SimplexMatrix::from_path(from), SimplexMatrix::from_path(to));
    for (name, m) in [("from", &l), ("to", &l2)] {
        if !moore_is_loop(m) {
            return Err(Error::Precondition(format!("{name} is not a loop")));
        }
    }
    if sigma.field() != l.field() || sigma.field() != l2.field() {
        return Err(Error::RingMismatch("witness and loops over different fields".into()));
    }
    let expected_boundary = l2.mul(&l.inverse())?;
    let faces = [sigma.face(0)?, sigma.face(1)?, sigma.face(2)?];
    let certified = faces[1].is_identity() && faces[2].is_identity() && faces[0] == expected_boundary;
    Ok(HomotopyCertificate {
        certified,
        faces,
        expected_boundary,
    })
}
