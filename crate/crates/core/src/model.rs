//! Graded generator systems: `N` primary generators carrying grades in a finite
//! Abelian group, a pairing matrix, and the exchange data (braid and cross
//! symmetries) the Fock operators are built from.
//!
//! Two kinds of exchange data are supported. A grade-diagonal model derives
//! everything from the bicharacter through the comodule braiding
//! `Psi(u (x) v) = eps(|v|, |u|) v (x) u`. An explicit model carries an
//! `N^2 x N^2` matrix `R` with `Psi(x^i (x) x^j) = sum_kl R[ij][kl] x^k (x) x^l`,
//! where the row is the input pair `(i, j)` and the column the output `(k, l)`,
//! both flattened as `a * N + b`.
//!
//! Conventions for duals: `x^{*i}` has grade `-g_i`, and the cross symmetry is
//! written `Psi(x^{*i} (x) x^j) = sum_kl T[ij][kl] x^l (x) x^{*k}`, so `k` is the
//! dual letter that keeps moving and `l` the letter left behind.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::group::{Bicharacter, GroupElement, GroupError, GroupSpec, RationalPhase};
use crate::report::{Check, CheckReport};
use crate::word::{FockVector, TensorWord};

pub type CMatrix = DMatrix<Complex64>;

/// Default tolerance for every floating-point check.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("a model needs at least one generator")]
    NoGenerators,
    #[error("{what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: String,
        got: String,
    },
    #[error("braid matrix R is not invertible (smallest singular value {0:.3e})")]
    SingularBraid(f64),
    #[error("grade of generator {index} does not lie in the model's group: {source}")]
    GradeNotInGroup { index: usize, source: GroupError },
    #[error("bicharacter is defined on {found}, model group is {expected}")]
    BicharacterGroup {
        expected: GroupSpec,
        found: GroupSpec,
    },
    #[error("generator index {index} out of range (model has {n} generators)")]
    GeneratorIndex { index: usize, n: usize },
    #[error("cannot exchange letters {} and {} of a word of length {len}", pos + 1, pos + 2)]
    Position { pos: usize, len: usize },
    #[error("{0} is only defined for grade-diagonal models")]
    WrongSpec(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BraidSpec {
    GradeDiagonal,
    /// `R[(i*N + j), (k*N + l)] = R^{ij}_{kl}`.
    Matrix(CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CrossSpec {
    /// Grade-diagonal: factor `eps(g_j, -g_i)`. Explicit: `T[ij][kl] = R[ij][lk]`.
    DerivedFromBraid,
    /// `T[(i*N + j), (k*N + l)] = T^{ij}_{kl}`.
    Matrix(CMatrix),
}

/// Sign placed between the pairing term and the hopping terms of the twisted
/// annihilator. `Plus` is the reading under which the twisted commutation
/// relation closes; `Minus` keeps the literal alternative for comparison.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExpansionSign {
    #[default]
    Plus,
    Minus,
}

impl ExpansionSign {
    pub fn factor(self) -> f64 {
        match self {
            ExpansionSign::Plus => 1.0,
            ExpansionSign::Minus => -1.0,
        }
    }
}

/// One output term `coef * (first, second)` of an exchange map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub first: usize,
    pub second: usize,
    pub coef: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleModel {
    eps: Bicharacter,
    grades: Vec<GroupElement>,
    pairing: CMatrix,
    pairing_hermitian: bool,
    braid: BraidSpec,
    cross: CrossSpec,
    expansion_sign: ExpansionSign,
    braid_table: Vec<Vec<Term>>,
    cross_table: Vec<Vec<Term>>,
    dual_braid_table: Vec<Vec<Term>>,
}

fn sparse_row(m: &CMatrix, row: usize, n: usize) -> Vec<Term> {
    (0..n * n)
        .filter(|&col| m[(row, col)] != Complex64::new(0.0, 0.0))
        .map(|col| Term {
            first: col / n,
            second: col % n,
            coef: m[(row, col)],
        })
        .collect()
}

impl ParticleModel {
    pub fn new(
        eps: Bicharacter,
        grades: Vec<GroupElement>,
        pairing: CMatrix,
        braid: BraidSpec,
        cross: CrossSpec,
    ) -> Result<Self, ModelError> {
        let group = eps.group().clone();
        let n = grades.len();
        if n == 0 {
            return Err(ModelError::NoGenerators);
        }
        for (index, g) in grades.iter().enumerate() {
            if g.group() != &group {
                return Err(ModelError::GradeNotInGroup {
                    index,
                    source: GroupError::GroupMismatch {
                        left: group.clone(),
                        right: g.group().clone(),
                    },
                });
            }
        }
        if pairing.shape() != (n, n) {
            return Err(ModelError::Shape {
                what: "pairing matrix",
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", pairing.nrows(), pairing.ncols()),
            });
        }
        let nn = n * n;
        if let BraidSpec::Matrix(r) = &braid {
            if r.shape() != (nn, nn) {
                return Err(ModelError::Shape {
                    what: "braid matrix R",
                    expected: format!("{nn}x{nn}"),
                    got: format!("{}x{}", r.nrows(), r.ncols()),
                });
            }
            let sv = r.clone().singular_values();
            let max = sv.max();
            let min = sv.min();
            if min.is_nan() || min <= 1e-12 * max.max(1.0) {
                return Err(ModelError::SingularBraid(min));
            }
        }
        if let CrossSpec::Matrix(t) = &cross {
            if t.shape() != (nn, nn) {
                return Err(ModelError::Shape {
                    what: "cross matrix T",
                    expected: format!("{nn}x{nn}"),
                    got: format!("{}x{}", t.nrows(), t.ncols()),
                });
            }
        }
        let pairing_hermitian = (&pairing - pairing.adjoint()).camax() <= DEFAULT_TOL;

        let mut model = ParticleModel {
            eps,
            grades,
            pairing,
            pairing_hermitian,
            braid,
            cross,
            expansion_sign: ExpansionSign::Plus,
            braid_table: Vec::new(),
            cross_table: Vec::new(),
            dual_braid_table: Vec::new(),
        };
        model.build_tables()?;
        Ok(model)
    }

    /// Grade-diagonal model with the derived cross symmetry.
    pub fn grade_diagonal(
        eps: Bicharacter,
        grades: Vec<GroupElement>,
        pairing: CMatrix,
    ) -> Result<Self, ModelError> {
        Self::new(
            eps,
            grades,
            pairing,
            BraidSpec::GradeDiagonal,
            CrossSpec::DerivedFromBraid,
        )
    }

    pub fn with_expansion_sign(mut self, sign: ExpansionSign) -> Self {
        self.expansion_sign = sign;
        self
    }

    fn build_tables(&mut self) -> Result<(), ModelError> {
        let n = self.n_generators();
        let mut braid = Vec::with_capacity(n * n);
        let mut cross = Vec::with_capacity(n * n);
        let mut dual = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                braid.push(match &self.braid {
                    BraidSpec::GradeDiagonal => vec![Term {
                        first: j,
                        second: i,
                        coef: self.braid_phase(i, j)?.to_complex(),
                    }],
                    BraidSpec::Matrix(r) => sparse_row(r, i * n + j, n),
                });
                cross.push(match (&self.cross, &self.braid) {
                    (CrossSpec::Matrix(t), _) => sparse_row(t, i * n + j, n),
                    (CrossSpec::DerivedFromBraid, BraidSpec::GradeDiagonal) => vec![Term {
                        first: i,
                        second: j,
                        coef: self.cross_phase(i, j)?.to_complex(),
                    }],
                    (CrossSpec::DerivedFromBraid, BraidSpec::Matrix(r)) => {
                        // T[ij][kl] = R[ij][lk]
                        sparse_row(r, i * n + j, n)
                            .into_iter()
                            .map(|t| Term {
                                first: t.second,
                                second: t.first,
                                coef: t.coef,
                            })
                            .collect()
                    }
                });
            }
        }
        // Psi(x^{*a} (x) x^{*b}) = sum_kl conj(R[ba][kl]) x^{*l} (x) x^{*k}: the
        // adjoint of the particle braiding under the Fock scalar product.
        for a in 0..n {
            for b in 0..n {
                dual.push(
                    braid[b * n + a]
                        .iter()
                        .map(|t| Term {
                            first: t.second,
                            second: t.first,
                            coef: t.coef.conj(),
                        })
                        .collect(),
                );
            }
        }
        self.braid_table = braid;
        self.cross_table = cross;
        self.dual_braid_table = dual;
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        self.eps.group()
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.eps
    }

    pub fn grades(&self) -> &[GroupElement] {
        &self.grades
    }

    pub fn n_generators(&self) -> usize {
        self.grades.len()
    }

    pub fn pairing(&self) -> &CMatrix {
        &self.pairing
    }

    /// `<i|j>`.
    pub fn pair(&self, i: usize, j: usize) -> Complex64 {
        self.pairing[(i, j)]
    }

    pub fn pairing_is_hermitian(&self) -> bool {
        self.pairing_hermitian
    }

    pub fn braid_spec(&self) -> &BraidSpec {
        &self.braid
    }

    pub fn cross_spec(&self) -> &CrossSpec {
        &self.cross
    }

    pub fn expansion_sign(&self) -> ExpansionSign {
        self.expansion_sign
    }

    pub fn is_grade_diagonal(&self) -> bool {
        matches!(self.braid, BraidSpec::GradeDiagonal)
    }

    pub fn check_generator(&self, index: usize) -> Result<(), ModelError> {
        if index >= self.n_generators() {
            return Err(ModelError::GeneratorIndex {
                index,
                n: self.n_generators(),
            });
        }
        Ok(())
    }

    /// `Psi(x^i (x) x^j)` as a list of output terms.
    pub fn braid_terms(&self, i: usize, j: usize) -> &[Term] {
        &self.braid_table[i * self.n_generators() + j]
    }

    /// `Psi(x^{*i} (x) x^j)`; each term is `coef * x^{second} (x) x^{*first}`.
    pub fn cross_terms(&self, i: usize, j: usize) -> &[Term] {
        &self.cross_table[i * self.n_generators() + j]
    }

    /// `Psi(x^{*i} (x) x^{*j})`; each term is `coef * x^{*first} (x) x^{*second}`.
    pub fn dual_braid_terms(&self, i: usize, j: usize) -> &[Term] {
        &self.dual_braid_table[i * self.n_generators() + j]
    }

    /// Exact braid phase `eps(g_j, g_i)` for a grade-diagonal model.
    pub fn braid_phase(&self, i: usize, j: usize) -> Result<RationalPhase, ModelError> {
        if !self.is_grade_diagonal() {
            return Err(ModelError::WrongSpec("braid_factor"));
        }
        self.check_generator(i)?;
        self.check_generator(j)?;
        Ok(self.eps.eval(&self.grades[j], &self.grades[i])?)
    }

    /// `eps(g_j, g_i)` as a complex number.
    pub fn braid_factor(&self, i: usize, j: usize) -> Result<Complex64, ModelError> {
        Ok(self.braid_phase(i, j)?.to_complex())
    }

    /// Exact factor `eps(g_j, -g_i)` picked up when `x^{*i}` moves right past `x^j`.
    pub fn cross_phase(&self, i: usize, j: usize) -> Result<RationalPhase, ModelError> {
        if !self.is_grade_diagonal() {
            return Err(ModelError::WrongSpec("cross_factor"));
        }
        self.check_generator(i)?;
        self.check_generator(j)?;
        Ok(self.eps.eval(&self.grades[j], &self.grades[i].neg())?)
    }

    pub fn cross_factor(&self, i: usize, j: usize) -> Result<Complex64, ModelError> {
        Ok(self.cross_phase(i, j)?.to_complex())
    }

    fn check_word(&self, word: &TensorWord) -> Result<(), ModelError> {
        word.letters()
            .iter()
            .try_for_each(|&a| self.check_generator(a))
    }

    /// Applies `Psi` to the letters at `pos` and `pos + 1` (0-based).
    pub fn braid_on_word(&self, word: &TensorWord, pos: usize) -> Result<FockVector, ModelError> {
        self.check_word(word)?;
        let letters = word.letters();
        if pos + 1 >= letters.len() {
            return Err(ModelError::Position {
                pos,
                len: letters.len(),
            });
        }
        let mut out = FockVector::zero();
        for t in self.braid_terms(letters[pos], letters[pos + 1]) {
            let mut v = letters.to_vec();
            v[pos] = t.first;
            v[pos + 1] = t.second;
            out.add_term(TensorWord::new(v), t.coef);
        }
        Ok(out)
    }

    /// Linear extension of [`ParticleModel::braid_on_word`].
    pub fn braid_on_vector(&self, v: &FockVector, pos: usize) -> Result<FockVector, ModelError> {
        v.try_map_linear(|w| self.braid_on_word(w, pos))
    }

    fn exact_braid(&self, word: &mut [usize], pos: usize) -> Result<RationalPhase, ModelError> {
        let phase = self.braid_phase(word[pos], word[pos + 1])?;
        word.swap(pos, pos + 1);
        Ok(phase)
    }

    /// `(Psi (x) id)(id (x) Psi)(Psi (x) id) = (id (x) Psi)(Psi (x) id)(id (x) Psi)`
    /// on every 3-letter word. Grade-diagonal models are checked in exact phase
    /// arithmetic.
    pub fn check_yang_baxter(&self, tol: f64) -> CheckReport {
        const NAME: &str = "yang_baxter";
        let n = self.n_generators();
        let mut worst = 0.0;
        let mut witness = None;
        for w in TensorWord::all(n, 3) {
            let defect = if self.is_grade_diagonal() {
                let run = |order: [usize; 3]| -> Result<(RationalPhase, Vec<usize>), ModelError> {
                    let mut letters = w.letters().to_vec();
                    let mut total = RationalPhase::ZERO;
                    for p in order {
                        total = total + self.exact_braid(&mut letters, p)?;
                    }
                    Ok((total, letters))
                };
                match (run([0, 1, 0]), run([1, 0, 1])) {
                    (Ok(l), Ok(r)) if l == r => 0.0,
                    (Ok((lp, lw)), Ok((rp, rw))) if lw == rw => {
                        (lp.to_complex() - rp.to_complex()).norm()
                    }
                    _ => f64::INFINITY,
                }
            } else {
                let v = FockVector::basis(w.clone());
                let apply = |order: [usize; 3]| {
                    order
                        .iter()
                        .try_fold(v.clone(), |acc, &p| self.braid_on_vector(&acc, p))
                };
                match (apply([0, 1, 0]), apply([1, 0, 1])) {
                    (Ok(l), Ok(r)) => (&l - &r).max_abs(),
                    _ => f64::INFINITY,
                }
            };
            if defect > worst {
                worst = defect;
                witness = Some(w.to_string());
            }
        }
        let mut check = Check::from_defect(NAME, worst, tol);
        if self.is_grade_diagonal() {
            check = check.with_note("exact phase arithmetic");
        }
        if let Some(w) = witness {
            check = check.with_witness(w);
        }
        CheckReport::single(check)
    }

    /// `Psi^2 = id` on every 2-letter word.
    pub fn check_symmetry(&self, tol: f64) -> CheckReport {
        const NAME: &str = "braid_squares_to_identity";
        let n = self.n_generators();
        let mut worst = 0.0;
        let mut witness = None;
        for w in TensorWord::all(n, 2) {
            let defect = if self.is_grade_diagonal() {
                let (i, j) = (w.letters()[0], w.letters()[1]);
                match (self.braid_phase(i, j), self.braid_phase(j, i)) {
                    (Ok(a), Ok(b)) => {
                        let total = a + b;
                        if total.is_zero() {
                            0.0
                        } else {
                            (total.to_complex() - Complex64::new(1.0, 0.0)).norm()
                        }
                    }
                    _ => f64::INFINITY,
                }
            } else {
                let v = FockVector::basis(w.clone());
                match self
                    .braid_on_vector(&v, 0)
                    .and_then(|x| self.braid_on_vector(&x, 0))
                {
                    Ok(sq) => (&sq - &v).max_abs(),
                    Err(_) => f64::INFINITY,
                }
            };
            if defect > worst {
                worst = defect;
                witness = Some(w.to_string());
            }
        }
        let mut check = Check::from_defect(NAME, worst, tol);
        if let Some(w) = witness {
            check = check.with_witness(w);
        }
        CheckReport::single(check)
    }

    /// Pairing of `u*` with `v`, nesting the single-letter pairing from the
    /// inside out: `prod_k <u_k|v_k>`.
    pub fn extend_pairing(&self, u: &TensorWord, v: &TensorWord) -> Result<Complex64, ModelError> {
        if u.len() != v.len() {
            return Err(ModelError::Shape {
                what: "paired words",
                expected: format!("length {}", u.len()),
                got: format!("length {}", v.len()),
            });
        }
        self.check_word(u)?;
        self.check_word(v)?;
        Ok(u.letters()
            .iter()
            .zip(v.letters())
            .map(|(&i, &j)| self.pair(i, j))
            .product())
    }

    /// Grade of a word, with `dual` letters counted as `-g_i`.
    pub fn word_grade(&self, word: &TensorWord, dual: bool) -> Result<GroupElement, ModelError> {
        self.check_word(word)?;
        let mut total = self.group().zero();
        for &a in word.letters() {
            let g = if dual {
                self.grades[a].neg()
            } else {
                self.grades[a].clone()
            };
            total = total.add(&g)?;
        }
        Ok(total)
    }
}

/// Identity pairing matrix of size `n`.
pub fn identity_pairing(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `q * swap` on `N^2`: `Psi(x^i (x) x^j) = q x^j (x) x^i`.
pub fn scaled_swap(n: usize, q: Complex64) -> CMatrix {
    let mut r = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            r[(i * n + j, j * n + i)] = q;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn single_cyclic(n: u64, q: &str, grades: &[i64]) -> ParticleModel {
        let g = GroupSpec::cyclic(n);
        let eps = Bicharacter::new(g.clone(), vec![vec![q.parse().unwrap()]]).unwrap();
        let grades = grades
            .iter()
            .map(|&a| g.element(&[a]).unwrap())
            .collect::<Vec<_>>();
        let n = grades.len();
        ParticleModel::grade_diagonal(eps, grades, identity_pairing(n)).unwrap()
    }

    fn fermions(n: usize) -> ParticleModel {
        single_cyclic(2, "1/2", &vec![1; n])
    }

    fn bosons(n: usize) -> ParticleModel {
        let g = GroupSpec::trivial();
        ParticleModel::grade_diagonal(
            Bicharacter::trivial(g.clone()),
            vec![g.zero(); n],
            identity_pairing(n),
        )
        .unwrap()
    }

    fn quon(q: f64) -> ParticleModel {
        let g = GroupSpec::trivial();
        ParticleModel::new(
            Bicharacter::trivial(g.clone()),
            vec![g.zero(); 2],
            identity_pairing(2),
            BraidSpec::Matrix(scaled_swap(2, c(q))),
            CrossSpec::DerivedFromBraid,
        )
        .unwrap()
    }

    #[test]
    fn make_model_examples_and_errors() {
        assert_eq!(fermions(2).n_generators(), 2);
        assert_eq!(bosons(1).n_generators(), 1);
        assert!(!quon(0.5).is_grade_diagonal());

        let g = GroupSpec::trivial();
        let eps = Bicharacter::trivial(g.clone());
        assert!(matches!(
            ParticleModel::grade_diagonal(eps.clone(), vec![g.zero(); 2], identity_pairing(3)),
            Err(ModelError::Shape { .. })
        ));
        assert!(matches!(
            ParticleModel::new(
                eps.clone(),
                vec![g.zero(); 2],
                identity_pairing(2),
                BraidSpec::Matrix(CMatrix::zeros(4, 4)),
                CrossSpec::DerivedFromBraid
            ),
            Err(ModelError::SingularBraid(_))
        ));
        assert!(matches!(
            ParticleModel::new(
                eps.clone(),
                vec![g.zero(); 2],
                identity_pairing(2),
                BraidSpec::Matrix(CMatrix::identity(3, 3)),
                CrossSpec::DerivedFromBraid
            ),
            Err(ModelError::Shape { .. })
        ));
        let z2 = GroupSpec::cyclic(2);
        assert!(matches!(
            ParticleModel::grade_diagonal(eps, vec![z2.generator(0)], identity_pairing(1)),
            Err(ModelError::GradeNotInGroup { index: 0, .. })
        ));
    }

    #[test]
    fn braid_factor_examples() {
        assert_eq!(fermions(2).braid_factor(0, 1).unwrap(), c(-1.0));
        assert_eq!(bosons(2).braid_factor(0, 1).unwrap(), c(1.0));
        let anyon = single_cyclic(4, "1/4", &[1, 1]);
        assert_eq!(anyon.braid_factor(0, 1).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            quon(0.5).braid_factor(0, 1),
            Err(ModelError::WrongSpec("braid_factor"))
        );
    }

    #[test]
    fn cross_factor_uses_dual_grade() {
        let anyon = single_cyclic(4, "1/4", &[1]);
        // eps(1, -1) = exp(2 pi i 3/4) = -i
        assert_eq!(anyon.cross_factor(0, 0).unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(fermions(1).cross_factor(0, 0).unwrap(), c(-1.0));
    }

    #[test]
    fn braid_on_word_examples() {
        let w = TensorWord::new(vec![0, 1]);
        let swapped = TensorWord::new(vec![1, 0]);
        let f = fermions(2).braid_on_word(&w, 0).unwrap();
        assert_eq!(f, FockVector::from_terms([(swapped.clone(), c(-1.0))]));
        let b = bosons(2).braid_on_word(&w, 0).unwrap();
        assert_eq!(b, FockVector::basis(swapped.clone()));
        let q = quon(0.5).braid_on_word(&w, 0).unwrap();
        assert_eq!(q, FockVector::from_terms([(swapped, c(0.5))]));
        assert!(matches!(
            bosons(2).braid_on_word(&w, 1),
            Err(ModelError::Position { pos: 1, len: 2 })
        ));
        assert!(bosons(2).braid_on_word(&TensorWord::vacuum(), 0).is_err());
    }

    #[test]
    fn yang_baxter_examples() {
        let r = fermions(3).check_yang_baxter(DEFAULT_TOL);
        assert!(r.all_pass());
        assert_eq!(r.max_defect(), 0.0);
        assert!(single_cyclic(4, "1/4", &[1, 2, 3])
            .check_yang_baxter(0.0)
            .all_pass());
        let q = quon(0.5).check_yang_baxter(1e-12);
        assert!(q.all_pass(), "{q}");
    }

    #[test]
    fn yang_baxter_detects_non_braid_matrix() {
        // R = swap composed with a non-diagonal mixing on the first factor.
        let g = GroupSpec::trivial();
        let mut r = scaled_swap(2, c(1.0));
        r[(0, 1)] = c(0.7);
        let m = ParticleModel::new(
            Bicharacter::trivial(g.clone()),
            vec![g.zero(); 2],
            identity_pairing(2),
            BraidSpec::Matrix(r),
            CrossSpec::DerivedFromBraid,
        )
        .unwrap();
        let rep = m.check_yang_baxter(DEFAULT_TOL);
        assert!(!rep.all_pass());
        assert!(rep.max_defect() > 1e-3);
    }

    #[test]
    fn symmetry_examples() {
        assert!(fermions(2).check_symmetry(DEFAULT_TOL).all_pass());
        let q = quon(0.5).check_symmetry(DEFAULT_TOL);
        assert!(!q.all_pass());
        assert!((q.max_defect() - 0.75).abs() < 1e-15);
        let anyon = single_cyclic(4, "1/4", &[1]);
        let a = anyon.check_symmetry(DEFAULT_TOL);
        assert!(!a.all_pass());
        assert!((a.max_defect() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn extend_pairing_examples() {
        let b = bosons(2);
        let w12 = TensorWord::new(vec![0, 1]);
        let w21 = TensorWord::new(vec![1, 0]);
        let w22 = TensorWord::new(vec![1, 1]);
        assert_eq!(b.extend_pairing(&w12, &w12).unwrap(), c(1.0));
        assert_eq!(b.extend_pairing(&w12, &w21).unwrap(), c(0.0));

        let g = GroupSpec::trivial();
        let cc = Complex64::new(0.3, 0.2);
        let mut p = identity_pairing(2);
        p[(0, 1)] = cc;
        p[(1, 0)] = cc.conj();
        let m =
            ParticleModel::grade_diagonal(Bicharacter::trivial(g.clone()), vec![g.zero(); 2], p)
                .unwrap();
        assert!(m.pairing_is_hermitian());
        // nested evaluation: <1|2> then <2|2>
        assert_eq!(m.extend_pairing(&w12, &w22).unwrap(), cc * c(1.0));
        assert!(m.extend_pairing(&w12, &TensorWord::new(vec![0])).is_err());
    }

    #[test]
    fn dual_grades_pair_to_unit() {
        let m = single_cyclic(4, "1/4", &[1, 3]);
        for w in TensorWord::all(2, 3) {
            let g = m.word_grade(&w, false).unwrap();
            let d = m.word_grade(&w, true).unwrap();
            assert!(g.add(&d).unwrap().is_zero());
        }
    }

    #[test]
    fn derived_cross_for_scaled_swap_is_diagonal() {
        let m = quon(0.3);
        for i in 0..2 {
            for j in 0..2 {
                let t = m.cross_terms(i, j);
                assert_eq!(t.len(), 1);
                assert_eq!((t[0].first, t[0].second), (i, j));
                assert_eq!(t[0].coef, c(0.3));
            }
        }
    }
}
