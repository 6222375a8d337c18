//! Based root data, duality, inner classes, and the classification of roots
//! relative to an involution of the torus.
//!
//! Conventions used throughout the crate:
//! - `X_*(H) = Z^n` (cocharacters) and `X^*(H) = Z^n` (characters), paired by
//!   the dot product.
//! - Matrices act on `X_*` as column-vector maps; the induced action on `X^*`
//!   of an automorphism `g` is by the inverse transpose (for involutions,
//!   simply the transpose).
//! - Roots live in `X^*`, coroots in `X_*`.

use crate::lattice::*;
use num::{One, Signed, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartanMatrix(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("unknown group spec token: {0}")]
    BadSpec(String),
    #[error("invalid involution: {0}")]
    BadInvolution(String),
}

/// One root together with its coroot and its coordinates in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    /// vector in `X^*`
    pub vec: Vec<Z>,
    /// coroot vector in `X_*`
    pub coroot: Vec<Z>,
    /// coordinates with respect to the simple roots
    pub coeffs: Vec<Z>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        // a root has all coefficients of one sign; positive = nonnegative
        self.coeffs.iter().all(|c| !c.is_negative()) && self.coeffs.iter().any(|c| c.is_positive())
    }

    pub fn height(&self) -> Z {
        self.coeffs.iter().sum()
    }

    pub fn char_vec(&self) -> CharVec {
        CharVec::from_z(&self.vec)
    }

    pub fn coroot_vec(&self) -> CochVec {
        CochVec::from_z(&self.coroot)
    }
}

/// A based root datum: lattices of rank `n`, simple roots and coroots, the
/// generated (finite) root list, and the half-sums `rho`, `rho_check`.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    /// rank of the lattices
    pub rank: usize,
    /// semisimple rank (number of simple roots)
    pub ss_rank: usize,
    /// simple roots as rows (`ss_rank x rank`)
    pub simple_roots: IntMatrix,
    /// simple coroots as rows (`ss_rank x rank`)
    pub simple_coroots: IntMatrix,
    /// Cartan matrix: `cartan[i][j] = <alpha_i, coroot_j>`
    pub cartan: IntMatrix,
    /// all roots; positive roots first (sorted by height then coefficients),
    /// then the corresponding negatives in the same order
    pub roots: Vec<Root>,
    index: HashMap<Vec<Z>, usize>,
    /// half the sum of the positive roots
    pub rho: CharVec,
    /// half the sum of the positive coroots
    pub rho_check: CochVec,
}

const ROOT_GENERATION_CAP: usize = 1000;

impl BasedRootDatum {
    /// Build and validate a datum from explicit simple root/coroot rows.
    pub fn new(simple_roots: IntMatrix, simple_coroots: IntMatrix) -> Result<Self, RootDataError> {
        if simple_roots.rows != simple_coroots.rows {
            return Err(RootDataError::RankMismatch(format!(
                "{} simple roots vs {} simple coroots",
                simple_roots.rows, simple_coroots.rows
            )));
        }
        if simple_roots.cols != simple_coroots.cols {
            return Err(RootDataError::RankMismatch(format!(
                "roots in rank {} but coroots in rank {}",
                simple_roots.cols, simple_coroots.cols
            )));
        }
        let m = simple_roots.rows;
        let n = simple_roots.cols;
        // Cartan matrix and its validity
        let mut cartan = IntMatrix::zero(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = Z::zero();
                for k in 0..n {
                    acc += simple_roots.at(i, k) * simple_coroots.at(j, k);
                }
                *cartan.at_mut(i, j) = acc;
            }
        }
        for i in 0..m {
            if *cartan.at(i, i) != zi(2) {
                return Err(RootDataError::InvalidCartanMatrix(format!(
                    "diagonal entry {} at {}",
                    cartan.at(i, i),
                    i
                )));
            }
            for j in 0..m {
                if i == j {
                    continue;
                }
                if cartan.at(i, j).is_positive() {
                    return Err(RootDataError::InvalidCartanMatrix(format!(
                        "positive off-diagonal entry at ({i},{j})"
                    )));
                }
                if cartan.at(i, j).is_zero() != cartan.at(j, i).is_zero() {
                    return Err(RootDataError::InvalidCartanMatrix(format!(
                        "asymmetric zero pattern at ({i},{j})"
                    )));
                }
            }
        }
        // generate the root system by closing the simple (root, coroot, coeff)
        // triples under simple reflections
        let mut seen: HashMap<Vec<Z>, (Vec<Z>, Vec<Z>)> = HashMap::new(); // vec -> (coroot, coeffs)
        let mut queue: Vec<(Vec<Z>, Vec<Z>, Vec<Z>)> = Vec::new();
        for i in 0..m {
            let v = simple_roots.row(i);
            let cv = simple_coroots.row(i);
            let mut coeffs = vec![Z::zero(); m];
            coeffs[i] = Z::one();
            seen.insert(v.clone(), (cv.clone(), coeffs.clone()));
            queue.push((v, cv, coeffs));
        }
        while let Some((v, cv, coeffs)) = queue.pop() {
            for i in 0..m {
                // s_i on the root: v - <v, coroot_i> alpha_i
                let pairing: Z = (0..n).map(|k| &v[k] * simple_coroots.at(i, k)).sum();
                let new_v: Vec<Z> =
                    (0..n).map(|k| &v[k] - &pairing * simple_roots.at(i, k)).collect();
                // s_i on the coroot: cv - <alpha_i, cv> coroot_i
                let cpairing: Z = (0..n).map(|k| simple_roots.at(i, k) * &cv[k]).sum();
                let new_cv: Vec<Z> =
                    (0..n).map(|k| &cv[k] - &cpairing * simple_coroots.at(i, k)).collect();
                let mut new_coeffs = coeffs.clone();
                new_coeffs[i] = &new_coeffs[i] - &pairing;
                if !seen.contains_key(&new_v) {
                    seen.insert(new_v.clone(), (new_cv.clone(), new_coeffs.clone()));
                    queue.push((new_v, new_cv, new_coeffs));
                    if seen.len() > ROOT_GENERATION_CAP {
                        return Err(RootDataError::InvalidCartanMatrix(
                            "root generation did not terminate (not finite type)".into(),
                        ));
                    }
                }
            }
        }
        let mut positives: Vec<Root> = seen
            .iter()
            .map(|(v, (cv, coeffs))| Root { vec: v.clone(), coroot: cv.clone(), coeffs: coeffs.clone() })
            .filter(|r| r.is_positive())
            .collect();
        positives.sort_by(|a, b| (a.height(), &a.coeffs).cmp(&(b.height(), &b.coeffs)));
        if positives.len() * 2 != seen.len() {
            return Err(RootDataError::InvalidCartanMatrix(
                "root system is not symmetric under negation".into(),
            ));
        }
        let mut roots = positives.clone();
        for p in &positives {
            roots.push(Root {
                vec: p.vec.iter().map(|x| -x).collect(),
                coroot: p.coroot.iter().map(|x| -x).collect(),
                coeffs: p.coeffs.iter().map(|x| -x).collect(),
            });
        }
        let index: HashMap<Vec<Z>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.vec.clone(), i)).collect();
        let half = qr(1, 2);
        let mut rho = CharVec::zero(n);
        let mut rho_check = CochVec::zero(n);
        for p in &positives {
            rho = rho.add(&CharVec::from_z(&p.vec).scale(&half));
            rho_check = rho_check.add(&CochVec::from_z(&p.coroot).scale(&half));
        }
        Ok(BasedRootDatum {
            rank: n,
            ss_rank: m,
            simple_roots,
            simple_coroots,
            cartan,
            roots,
            index,
            rho,
            rho_check,
        })
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root_index(&self, vec: &[Z]) -> Option<usize> {
        self.index.get(vec).copied()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    /// Index of the negative of root `i`.
    pub fn negative_of(&self, i: usize) -> usize {
        let p = self.num_positive();
        if i < p {
            i + p
        } else {
            i - p
        }
    }

    /// Index of the `k`-th simple root in the root list.
    pub fn simple_index(&self, k: usize) -> usize {
        self.root_index(&self.simple_roots.row(k)).expect("simple root is a root")
    }

    /// Which simple root this root-list index is, if any.
    pub fn as_simple(&self, i: usize) -> Option<usize> {
        (0..self.ss_rank).find(|&k| self.simple_index(k) == i)
    }

    /// Matrix of the simple reflection `s_i` acting on `X_*`.
    pub fn simple_reflection_cochar(&self, i: usize) -> IntMatrix {
        // v -> v - <alpha_i, v> coroot_i  =  (I - coroot_i * alpha_i^T) v
        let n = self.rank;
        let mut m = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                let sub = self.simple_coroots.at(i, r) * self.simple_roots.at(i, c);
                *m.at_mut(r, c) -= sub;
            }
        }
        m
    }

    /// Matrix of the reflection in an arbitrary root (acting on `X_*`).
    pub fn reflection_cochar(&self, root_idx: usize) -> IntMatrix {
        let n = self.rank;
        let rt = &self.roots[root_idx];
        let mut m = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                let sub = &rt.coroot[r] * &rt.vec[c];
                *m.at_mut(r, c) -= sub;
            }
        }
        m
    }

    /// Apply a cocharacter-side matrix to a root (via the transpose action
    /// on `X^*`), returning the root index of the image; `None` if the image
    /// is not a root.
    pub fn act_on_root(&self, mat_cochar: &IntMatrix, root_idx: usize) -> Option<usize> {
        let img = mat_cochar.transpose().apply_z(&self.roots[root_idx].vec);
        self.root_index(&img)
    }

    /// The longest Weyl element, as a matrix on `X_*` together with a reduced
    /// word, computed by the greedy descent from `rho_check`.
    pub fn longest_element(&self) -> (IntMatrix, Vec<usize>) {
        let mut v = self.rho_check.clone();
        let mut word = Vec::new();
        let mut mat = IntMatrix::identity(self.rank);
        loop {
            let mut progressed = false;
            for i in 0..self.ss_rank {
                let p = CharVec::from_z(&self.simple_roots.row(i)).pair(&v);
                if p.is_positive() {
                    let s = self.simple_reflection_cochar(i);
                    v = s.apply(&v);
                    mat = s.mul(&mat);
                    word.push(i);
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                break;
            }
        }
        word.reverse(); // mat = s_{i_k} ... s_{i_1}; as a word left-to-right
        (mat, word)
    }

    /// Dual datum: roots and coroots swapped.
    pub fn dual(&self) -> BasedRootDatum {
        BasedRootDatum::new(self.simple_coroots.clone(), self.simple_roots.clone())
            .expect("dual of a valid datum is valid")
    }

    /// Pairing of a rational character with the coroot of root `i`.
    pub fn pair_with_coroot(&self, lambda: &CharVec, i: usize) -> Q {
        lambda.pair(&self.roots[i].coroot_vec())
    }

    /// Dominant representative of the Weyl orbit of a rational character.
    pub fn make_dominant(&self, lambda: &CharVec) -> CharVec {
        let mut v = lambda.clone();
        loop {
            let mut progressed = false;
            for i in 0..self.ss_rank {
                let p = v.pair(&CochVec::from_z(&self.simple_coroots.row(i)));
                if p.is_negative() {
                    // s_i on X^*: v - <v, coroot_i> alpha_i
                    v = v.sub(&CharVec::from_z(&self.simple_roots.row(i)).scale(&p));
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return v;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Group-spec grammar
// ---------------------------------------------------------------------------

/// Isogeny choice for type shorthands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
}

/// Standard Cartan matrix of one simple type, `cartan[i][j] = <alpha_i, coroot_j>`.
fn cartan_of_type(letter: char, rank: usize) -> Result<Vec<Vec<i64>>, RootDataError> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>| {
        for i in 0..rank - 1 {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    };
    match (letter, rank) {
        ('A', r) if r >= 1 => {
            if r > 1 {
                chain(&mut a);
            }
        }
        ('B', r) if r >= 2 => {
            chain(&mut a);
            // last root short: <alpha_{r-2}, coroot_{r-1}> = -2
            a[rank - 2][rank - 1] = -2;
            a[rank - 1][rank - 2] = -1;
        }
        ('C', r) if r >= 2 => {
            chain(&mut a);
            a[rank - 2][rank - 1] = -1;
            a[rank - 1][rank - 2] = -2;
        }
        ('D', r) if r >= 3 => {
            for i in 0..rank - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[rank - 3][rank - 1] = -1;
            a[rank - 1][rank - 3] = -1;
        }
        ('G', 2) => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
        ('F', 4) => {
            chain(&mut a);
            a[1][2] = -2;
            a[2][1] = -1;
        }
        ('E', r) if (6..=8).contains(&r) => {
            // Bourbaki numbering: node 2 attaches to node 4
            for i in 2..rank - 1 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[0][2] = -1;
            a[2][0] = -1;
            a[1][3] = -1;
            a[3][1] = -1;
        }
        _ => {
            return Err(RootDataError::BadSpec(format!("{letter}{rank}")));
        }
    }
    Ok(a)
}

/// Build a datum from a Lie-type shorthand: `TYPE{RANK}` tokens joined by
/// `.`, with `T{k}` denoting a rank-`k` central torus, e.g. `"A1.T1"`,
/// `"B2"`, `"A2.A2"`. The isogeny applies to every simple factor.
pub fn build_datum(spec: &str, isogeny: Isogeny) -> Result<BasedRootDatum, RootDataError> {
    let mut factors: Vec<(char, usize, bool)> = Vec::new(); // (letter, rank, is_torus)
    for token in spec.split('.') {
        let token = token.trim();
        if token.is_empty() {
            return Err(RootDataError::BadSpec("empty token".into()));
        }
        let letter = token.chars().next().unwrap().to_ascii_uppercase();
        let rank: usize = token[1..]
            .parse()
            .map_err(|_| RootDataError::BadSpec(token.to_string()))?;
        if letter == 'T' {
            if rank == 0 {
                return Err(RootDataError::BadSpec(token.to_string()));
            }
            factors.push((letter, rank, true));
        } else {
            factors.push((letter, rank, false));
        }
    }
    let total_rank: usize = factors.iter().map(|f| f.1).sum();
    let ss_rank: usize = factors.iter().filter(|f| !f.2).map(|f| f.1).sum();
    let mut simple_roots = IntMatrix::zero(ss_rank, total_rank);
    let mut simple_coroots = IntMatrix::zero(ss_rank, total_rank);
    let mut row = 0;
    let mut col = 0;
    for (letter, rank, is_torus) in factors {
        if is_torus {
            col += rank;
            continue;
        }
        let a = cartan_of_type(letter, rank)?;
        for j in 0..rank {
            match isogeny {
                Isogeny::SimplyConnected => {
                    // coroots are the standard basis; alpha_j = (A^T) column block
                    *simple_coroots.at_mut(row + j, col + j) = Z::one();
                    for i in 0..rank {
                        *simple_roots.at_mut(row + j, col + i) = zi(a[j][i]);
                    }
                }
                Isogeny::Adjoint => {
                    *simple_roots.at_mut(row + j, col + j) = Z::one();
                    for i in 0..rank {
                        *simple_coroots.at_mut(row + j, col + i) = zi(a[i][j]);
                    }
                }
            }
        }
        row += rank;
        col += rank;
    }
    BasedRootDatum::new(simple_roots, simple_coroots)
}

// ---------------------------------------------------------------------------
// Inner classes and involutions
// ---------------------------------------------------------------------------

/// An inner class: a pinned involutive automorphism `gamma` of the datum,
/// stored by its action on `X_*`.
#[derive(Clone, Debug)]
pub struct InnerClass {
    pub datum: BasedRootDatum,
    /// action on `X_*`
    pub gamma: IntMatrix,
    /// permutation of the simple roots induced by `gamma`
    pub simple_perm: Vec<usize>,
}

/// How to pick the distinguished involution for a datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerClassSpec {
    /// `gamma = identity` (equal-rank / compact inner class)
    Compact,
    /// `gamma = -w0` on `X_*` (the inner class of the split form; on central
    /// torus factors this is inversion)
    Split,
    /// explicit matrix on `X_*`
    Matrix(IntMatrix),
}

impl InnerClass {
    pub fn new(datum: BasedRootDatum, gamma: IntMatrix) -> Result<Self, RootDataError> {
        let n = datum.rank;
        if gamma.rows != n || gamma.cols != n {
            return Err(RootDataError::RankMismatch("inner-class matrix size".into()));
        }
        if !gamma.mul(&gamma).is_identity() {
            return Err(RootDataError::BadInvolution("gamma^2 != 1".into()));
        }
        // gamma permutes the simple coroots
        let mut perm = Vec::with_capacity(datum.ss_rank);
        for i in 0..datum.ss_rank {
            let img = gamma.apply_z(&datum.simple_coroots.row(i));
            let j = (0..datum.ss_rank).find(|&j| datum.simple_coroots.row(j) == img).ok_or_else(
                || RootDataError::BadInvolution(format!("gamma does not permute simple coroots ({i})")),
            )?;
            perm.push(j);
        }
        // the transpose action must permute the simple roots compatibly
        let gt = gamma.transpose();
        for i in 0..datum.ss_rank {
            let img = gt.apply_z(&datum.simple_roots.row(perm[i]));
            if img != datum.simple_roots.row(i) {
                return Err(RootDataError::BadInvolution(format!(
                    "gamma action on roots incompatible with coroot permutation ({i})"
                )));
            }
        }
        Ok(InnerClass { datum, gamma, simple_perm: perm })
    }

    pub fn from_spec(datum: BasedRootDatum, spec: &InnerClassSpec) -> Result<Self, RootDataError> {
        let gamma = match spec {
            InnerClassSpec::Compact => IntMatrix::identity(datum.rank),
            InnerClassSpec::Split => datum.longest_element().0.neg(),
            InnerClassSpec::Matrix(m) => m.clone(),
        };
        InnerClass::new(datum, gamma)
    }

    /// The distinguished involution of the torus in this inner class.
    pub fn distinguished_involution(&self) -> Involution {
        Involution { mat: self.gamma.clone() }
    }

    /// The dual inner class on the dual datum: `-(w0 gamma)^T` as a matrix on
    /// `X_*` of the dual datum (= `X^*` of this one).
    pub fn dual(&self) -> InnerClass {
        let (w0, _) = self.datum.longest_element();
        let gcheck = w0.mul(&self.gamma).transpose().neg();
        InnerClass::new(self.datum.dual(), gcheck)
            .expect("dual inner class of a valid inner class is valid")
    }
}

/// An involution of the torus, stored by its action on `X_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub mat: IntMatrix,
}

/// Type of a root relative to an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootType {
    Imaginary,
    Real,
    Complex,
}

impl Involution {
    pub fn new(datum: &BasedRootDatum, mat: IntMatrix) -> Result<Self, RootDataError> {
        if !mat.mul(&mat).is_identity() {
            return Err(RootDataError::BadInvolution("tau^2 != 1".into()));
        }
        // tau must permute the root set (transpose action on X^*)
        let t = mat.transpose();
        for r in &datum.roots {
            if datum.root_index(&t.apply_z(&r.vec)).is_none() {
                return Err(RootDataError::BadInvolution("tau does not permute the roots".into()));
            }
        }
        Ok(Involution { mat })
    }

    /// Action on `X^*` (transpose, since the matrix is an involution).
    pub fn char_action(&self) -> IntMatrix {
        self.mat.transpose()
    }

    pub fn apply_char(&self, v: &CharVec) -> CharVec {
        self.char_action().apply(v)
    }

    pub fn apply_coch(&self, v: &CochVec) -> CochVec {
        self.mat.apply(v)
    }

    /// Classify a root: imaginary iff fixed by the transpose action, real iff
    /// negated, complex otherwise.
    pub fn classify_root(&self, datum: &BasedRootDatum, root_idx: usize) -> RootType {
        let img = self.char_action().apply_z(&datum.roots[root_idx].vec);
        if img == datum.roots[root_idx].vec {
            RootType::Imaginary
        } else if img == datum.roots[root_idx].vec.iter().map(|x| -x).collect::<Vec<_>>() {
            RootType::Real
        } else {
            RootType::Complex
        }
    }

    /// Indices of all imaginary roots.
    pub fn imaginary_roots(&self, datum: &BasedRootDatum) -> Vec<usize> {
        (0..datum.roots.len())
            .filter(|&i| self.classify_root(datum, i) == RootType::Imaginary)
            .collect()
    }

    pub fn real_roots(&self, datum: &BasedRootDatum) -> Vec<usize> {
        (0..datum.roots.len())
            .filter(|&i| self.classify_root(datum, i) == RootType::Real)
            .collect()
    }

    /// Simple roots of the imaginary root subsystem: positive imaginary
    /// roots that are not sums of two positive imaginary roots.
    pub fn simple_imaginary(&self, datum: &BasedRootDatum) -> Vec<usize> {
        subsystem_simples(datum, &self.imaginary_roots(datum))
    }

    pub fn simple_real(&self, datum: &BasedRootDatum) -> Vec<usize> {
        subsystem_simples(datum, &self.real_roots(datum))
    }
}

/// Simple roots of a closed subsystem, given by root indices: the positive
/// members that are not sums of two positive members.
pub fn subsystem_simples(datum: &BasedRootDatum, subsystem: &[usize]) -> Vec<usize> {
    let positives: Vec<usize> =
        subsystem.iter().copied().filter(|&i| datum.roots[i].is_positive()).collect();
    let mut simples = Vec::new();
    'outer: for &i in &positives {
        for &j in &positives {
            for &k in &positives {
                if j <= k {
                    let sum: Vec<Z> = datum.roots[j]
                        .vec
                        .iter()
                        .zip(&datum.roots[k].vec)
                        .map(|(a, b)| a + b)
                        .collect();
                    if sum == datum.roots[i].vec {
                        continue 'outer;
                    }
                }
            }
        }
        simples.push(i);
    }
    simples
}

/// The integral root system of a rational infinitesimal character.
#[derive(Clone, Debug)]
pub struct IntegralSystem {
    /// indices of all integral roots
    pub roots: Vec<usize>,
    /// indices of the simple roots of the integral subsystem (relative to the
    /// ambient positivity)
    pub simples: Vec<usize>,
}

/// `{alpha : <lambda, coroot(alpha)> in Z}` with its simple system.
pub fn integral_system(datum: &BasedRootDatum, lambda: &CharVec) -> IntegralSystem {
    let roots: Vec<usize> = (0..datum.roots.len())
        .filter(|&i| q_is_int(&datum.pair_with_coroot(lambda, i)))
        .collect();
    let simples = subsystem_simples(datum, &roots);
    IntegralSystem { roots, simples }
}

/// A restricted root: the nonzero restriction to the (-1)-eigenspace of an
/// involution, together with its coroot and the ambient roots restricting to it.
#[derive(Clone, Debug)]
pub struct RestrictedRoot {
    /// the restriction `(beta - tau^T beta)/2`, a rational character
    pub vec: CharVec,
    /// the restricted coroot: `c (1 - tau) beta_check` normalized so that the
    /// pairing with `vec` is 2
    pub coroot: CochVec,
    /// ambient root indices restricting to this
    pub sources: Vec<usize>,
    pub positive: bool,
}

/// The restricted root system of an involution: the roots orthogonal to all
/// imaginary coroots (`Psi_q`) and their distinct nonzero restrictions to the
/// (-1)-eigenspace (`Psi_res`), with a simple system.
#[derive(Clone, Debug)]
pub struct RestrictedSystem {
    /// ambient indices of the roots of `Psi_q`
    pub psi_q: Vec<usize>,
    pub restricted: Vec<RestrictedRoot>,
    /// indices into `restricted` of the chosen simple system
    pub simples: Vec<usize>,
}

pub fn restricted_system(datum: &BasedRootDatum, tau: &Involution) -> RestrictedSystem {
    let imaginary = tau.imaginary_roots(datum);
    let psi_q: Vec<usize> = (0..datum.roots.len())
        .filter(|&b| {
            imaginary.iter().all(|&a| {
                datum.roots[b].char_vec().pair(&datum.roots[a].coroot_vec()).is_zero()
            })
        })
        .collect();
    let half = qr(1, 2);
    // positivity of a restriction is read off lexicographically against a
    // basis of the (-1)-eigenspace of tau on the cocharacter side; source
    // positivity is not usable because two positive roots can restrict to
    // opposite vectors (e.g. a factor-swapping involution)
    let mut mp1 = tau.mat.clone();
    for i in 0..datum.rank {
        *mp1.at_mut(i, i) += Z::from(1);
    }
    let minus_basis = int_kernel(&mp1);
    let lex_positive = |res: &CharVec| -> bool {
        for b in &minus_basis {
            let p = res.pair(&CochVec::from_z(b));
            if !p.is_zero() {
                return p > Q::zero();
            }
        }
        panic!("nonzero restricted root pairs to zero with the minus eigenspace");
    };
    let mut restricted: Vec<RestrictedRoot> = Vec::new();
    for &b in &psi_q {
        let beta = datum.roots[b].char_vec();
        let res = beta.sub(&tau.apply_char(&beta)).scale(&half);
        if res.is_zero() {
            continue; // imaginary roots of Psi_q would restrict to zero
        }
        if let Some(rr) = restricted.iter_mut().find(|rr| rr.vec == res) {
            rr.sources.push(b);
            continue;
        }
        // restricted coroot: proportional to (1 - tau) beta_check, with
        // <res, coroot> = 2
        let bc = datum.roots[b].coroot_vec();
        let dir = bc.sub(&tau.apply_coch(&bc));
        let norm = res.pair(&dir);
        assert!(!norm.is_zero(), "restricted root with isotropic direction");
        let coroot = dir.scale(&(qi(2) / norm));
        let positive = lex_positive(&res);
        restricted.push(RestrictedRoot { vec: res, coroot, sources: vec![b], positive });
    }
    let simples = restricted_simples(&restricted);
    RestrictedSystem { psi_q, restricted, simples }
}

/// As [`restricted_system`], but with positivity adapted to the chamber
/// containing `nu`: a restricted root counts positive when it pairs
/// positively with `nu`, falling back to the lexicographic rule on the
/// walls. Deforming `nu` towards a wall of this chamber stays inside its
/// closure, so the straight deformation path meets no other wall.
pub fn restricted_system_toward(
    datum: &BasedRootDatum,
    tau: &Involution,
    nu: &CharVec,
) -> RestrictedSystem {
    let mut rs = restricted_system(datum, tau);
    for r in &mut rs.restricted {
        let p = nu.pair(&r.coroot);
        if !p.is_zero() {
            r.positive = p > Q::zero();
        }
    }
    rs.simples = restricted_simples(&rs.restricted);
    rs
}

fn restricted_simples(restricted: &[RestrictedRoot]) -> Vec<usize> {
    let pos: Vec<usize> = (0..restricted.len()).filter(|&i| restricted[i].positive).collect();
    // indivisible: v such that v/2 is not also a restricted root
    let indivisible: Vec<usize> = pos
        .iter()
        .copied()
        .filter(|&i| {
            let hv = restricted[i].vec.scale(&qr(1, 2));
            !restricted.iter().any(|r| r.vec == hv)
        })
        .collect();
    let mut simples = Vec::new();
    'outer: for &i in &indivisible {
        for &j in &pos {
            for &k in &pos {
                if j <= k {
                    let sum = restricted[j].vec.add(&restricted[k].vec);
                    if sum == restricted[i].vec {
                        continue 'outer;
                    }
                }
            }
        }
        simples.push(i);
    }
    simples
}

#[cfg(test)]
mod unit {
    use super::*;

    #[test]
    fn a1_sc_and_ad() {
        let sc = build_datum("A1", Isogeny::SimplyConnected).unwrap();
        assert_eq!(sc.simple_roots.row(0), vec![zi(2)]);
        assert_eq!(sc.simple_coroots.row(0), vec![zi(1)]);
        let ad = build_datum("A1", Isogeny::Adjoint).unwrap();
        assert_eq!(ad.simple_roots.row(0), vec![zi(1)]);
        assert_eq!(ad.simple_coroots.row(0), vec![zi(2)]);
    }
}
