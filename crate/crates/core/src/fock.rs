//! Creation and annihilation operators on the tensor-word Fock space.
//!
//! * `create` prepends a letter.
//! * `annihilate_free` pairs only with the first letter (infinite statistics).
//! * `annihilate_twisted` lets the dual letter hop rightwards through the
//!   word, picking up the cross symmetry at each step and pairing wherever it
//!   meets a letter:
//!
//!   `b_i([j, rest]) = <i|j> [rest] + s * sum_kl T[ij][kl] [l] (x) b_k(rest)`
//!
//!   with `s` the model's [`ExpansionSign`](crate::model::ExpansionSign).
//!
//! The scalar product on sector `n` is read off the vacuum amplitude of
//! successive twisted annihilations; its kernel holds the null states.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use thiserror::Error;

use crate::model::{CMatrix, ModelError, ParticleModel};
use crate::report::{Check, CheckReport};
use crate::word::{FockVector, TensorWord, PRUNE_EPS};

/// Largest number of basis words any single sector computation may touch.
pub const MAX_SECTOR_WORDS: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sector {len} has {size} basis words ({n_gen}^{len}), above the limit of {MAX_SECTOR_WORDS}")]
    ResourceGuard {
        n_gen: usize,
        len: usize,
        size: u128,
    },
    #[error("Gram matrix of sector {sector} is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { sector: usize, asymmetry: f64 },
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn sector_size(n_gen: usize, len: usize) -> u128 {
    (n_gen as u128).saturating_pow(len as u32)
}

fn guard(model: &ParticleModel, len: usize) -> Result<(), FockError> {
    let n_gen = model.n_generators();
    let size = sector_size(n_gen, len);
    if size > MAX_SECTOR_WORDS {
        return Err(FockError::ResourceGuard { n_gen, len, size });
    }
    Ok(())
}

/// The `N^n` basis words of sector `n`, subject to the resource guard.
pub fn basis_words(model: &ParticleModel, n: usize) -> Result<Vec<TensorWord>, FockError> {
    guard(model, n)?;
    Ok(TensorWord::all(model.n_generators(), n))
}

pub fn create(model: &ParticleModel, i: usize, v: &FockVector) -> Result<FockVector, FockError> {
    model.check_generator(i)?;
    Ok(v.map_linear(|w| FockVector::basis(w.prepend(i))))
}

pub fn annihilate_free(
    model: &ParticleModel,
    i: usize,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    model.check_generator(i)?;
    Ok(v.map_linear(|w| match w.first() {
        None => FockVector::zero(),
        Some(j) => FockVector::from_terms([(w.without(0), model.pair(i, j))]),
    }))
}

fn twisted_on_word(model: &ParticleModel, i: usize, w: &TensorWord) -> FockVector {
    let sign = model.expansion_sign().factor();
    let letters = w.letters();
    let mut out = FockVector::zero();
    // (letters already passed, current dual letter) -> amplitude
    let mut frontier: BTreeMap<(Vec<usize>, usize), Complex64> = BTreeMap::new();
    frontier.insert((Vec::new(), i), Complex64::new(1.0, 0.0));
    for (p, &letter) in letters.iter().enumerate() {
        let mut next: BTreeMap<(Vec<usize>, usize), Complex64> = BTreeMap::new();
        for ((prefix, dual), amp) in frontier {
            let g = model.pair(dual, letter);
            if g != c0() {
                let mut word = prefix.clone();
                word.extend_from_slice(&letters[p + 1..]);
                out.add_term(TensorWord::new(word), amp * g);
            }
            for t in model.cross_terms(dual, letter) {
                let mut moved = prefix.clone();
                moved.push(t.second);
                *next.entry((moved, t.first)).or_insert_with(c0) += amp * t.coef * sign;
            }
        }
        next.retain(|_, a| a.norm() >= PRUNE_EPS);
        frontier = next;
    }
    out
}

pub fn annihilate_twisted(
    model: &ParticleModel,
    i: usize,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    model.check_generator(i)?;
    Ok(v.map_linear(|w| twisted_on_word(model, i, w)))
}

/// Braids letters `pos`, `pos + 1` (0-based) of every word in `v`.
pub fn exchange(
    model: &ParticleModel,
    pos: usize,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    Ok(model.braid_on_vector(v, pos)?)
}

/// `a_i a^+_j = <i|j> id` on every basis word of length `<= n_max`.
pub fn check_infinite_statistics(
    model: &ParticleModel,
    n_max: usize,
    tol: f64,
) -> Result<CheckReport, FockError> {
    let n = model.n_generators();
    let mut worst = 0.0;
    let mut witness = None;
    for len in 0..=n_max {
        for w in basis_words(model, len)? {
            let v = FockVector::basis(w.clone());
            for i in 0..n {
                for j in 0..n {
                    let lhs = annihilate_free(model, i, &create(model, j, &v)?)?;
                    let d = (&lhs - &v.scale(model.pair(i, j))).max_abs();
                    if d > worst {
                        worst = d;
                        witness = Some(format!("i={}, j={}, word={}", i + 1, j + 1, w));
                    }
                }
            }
        }
    }
    let mut check = Check::from_defect("infinite_statistics", worst, tol);
    if let Some(w) = witness {
        check = check.with_witness(w);
    }
    Ok(CheckReport::single(check))
}

/// `b_i b^+_j - sum_kl T[ij][kl] b^+_l b_k - <i|j>` applied to `v`.
pub fn commutator_residual(
    model: &ParticleModel,
    i: usize,
    j: usize,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let mut d = annihilate_twisted(model, i, &create(model, j, v)?)?;
    for t in model.cross_terms(i, j) {
        let term = create(model, t.second, &annihilate_twisted(model, t.first, v)?)?;
        d = &d - &term.scale(t.coef);
    }
    Ok(&d - &v.scale(model.pair(i, j)))
}

/// Largest residual of the twisted commutation relation for `(i, j)` over
/// sector `n`.
pub fn commutator_defect(
    model: &ParticleModel,
    i: usize,
    j: usize,
    n: usize,
    tol: f64,
) -> Result<CheckReport, FockError> {
    model.check_generator(i)?;
    model.check_generator(j)?;
    let mut worst = 0.0;
    let mut witness = None;
    for w in basis_words(model, n)? {
        let d = commutator_residual(model, i, j, &FockVector::basis(w.clone()))?.max_abs();
        if d > worst {
            worst = d;
            witness = Some(w.to_string());
        }
    }
    let mut check = Check::from_defect(
        format!("commutator[{},{}]@n={}", i + 1, j + 1, n),
        worst,
        tol,
    );
    if let Some(w) = witness {
        check = check.with_witness(w);
    }
    Ok(CheckReport::single(check))
}

/// Commutator checks for every generator pair and every sector `<= n_max`,
/// folded into one check.
pub fn commutator_defect_all(
    model: &ParticleModel,
    n_max: usize,
    tol: f64,
) -> Result<Check, FockError> {
    let n = model.n_generators();
    let mut worst = Check::from_defect("twisted_commutation", 0.0, tol);
    for len in 0..=n_max {
        for i in 0..n {
            for j in 0..n {
                let c = commutator_defect(model, i, j, len, tol)?.checks.remove(0);
                if c.defect > worst.defect {
                    worst = Check::from_defect("twisted_commutation", c.defect, tol)
                        .with_witness(format!("{}: {}", c.name, c.witness.unwrap_or_default()));
                }
            }
        }
    }
    Ok(worst)
}

/// Vacuum amplitudes of `b_{s_d} ... b_{s_1} v` for every sequence `s` of
/// length `depth`, indexed like [`TensorWord::rank_in`] with `s_1` applied first.
///
/// For `v` in sector `depth` this is `G v` with `G` the sector's Gram matrix.
pub fn annihilation_profile(
    model: &ParticleModel,
    v: &FockVector,
    depth: usize,
) -> Result<Vec<Complex64>, FockError> {
    guard(model, depth)?;
    let n = model.n_generators();
    let mut out = vec![c0(); sector_size(n, depth) as usize];
    fn walk(
        model: &ParticleModel,
        v: &FockVector,
        left: usize,
        index: usize,
        out: &mut [Complex64],
    ) {
        if left == 0 {
            out[index] = v.get(&TensorWord::vacuum());
            return;
        }
        for a in 0..model.n_generators() {
            let u = v.map_linear(|w| twisted_on_word(model, a, w));
            if !u.is_zero() {
                walk(model, &u, left - 1, index * model.n_generators() + a, out);
            }
        }
    }
    walk(model, v, depth, 0, &mut out);
    Ok(out)
}

/// Euclidean norm of `G v`, summed over the sectors present in `v`. Zero
/// exactly when `v` is a null state.
pub fn gram_norm(model: &ParticleModel, v: &FockVector) -> Result<f64, FockError> {
    let mut total = 0.0;
    for len in v.lengths() {
        let profile = annihilation_profile(model, &v.sector(len), len)?;
        total += profile.iter().map(|c| c.norm_sqr()).sum::<f64>();
    }
    Ok(total.sqrt())
}

/// Scalar products between the basis words of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    pub sector: usize,
    pub words: Vec<TensorWord>,
    pub matrix: CMatrix,
}

impl Gram {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// `max |G - G^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.matrix
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect()
    }

    /// Number of singular values `>= tol * max(1, sigma_max)`.
    pub fn rank(&self, tol: f64) -> usize {
        let sv = self.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let cut = tol * max.max(1.0);
        sv.iter().filter(|&&s| s >= cut).count()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

/// Entry `(w, w')` is the vacuum amplitude of annihilating the letters of `w`
/// in order (first letter first) from `w'`.
pub fn gram_matrix(model: &ParticleModel, n: usize) -> Result<Gram, FockError> {
    let words = basis_words(model, n)?;
    let dim = words.len();
    let mut matrix = CMatrix::zeros(dim, dim);
    for (col, w) in words.iter().enumerate() {
        let profile = annihilation_profile(model, &FockVector::basis(w.clone()), n)?;
        matrix.set_column(col, &DVector::from_vec(profile));
    }
    Ok(Gram {
        sector: n,
        words,
        matrix,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorDimension {
    pub full: usize,
    pub quotient: usize,
}

pub fn sector_dimension(
    model: &ParticleModel,
    n: usize,
    tol: f64,
) -> Result<SectorDimension, FockError> {
    let gram = gram_matrix(model, n)?;
    let asymmetry = gram.hermiticity_defect();
    if asymmetry > tol {
        return Err(FockError::NotHermitian {
            sector: n,
            asymmetry,
        });
    }
    Ok(SectorDimension {
        full: gram.dim(),
        quotient: gram.rank(tol),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdCheck {
    pub check: Check,
    pub min_eigenvalue: Option<f64>,
}

/// Positivity of the sector Gram form. Non-Hermitian forms are reported as
/// skipped rather than failed.
pub fn gram_psd_check(model: &ParticleModel, n: usize, tol: f64) -> Result<PsdCheck, FockError> {
    let name = format!("gram_psd@n={n}");
    let gram = gram_matrix(model, n)?;
    let asymmetry = gram.hermiticity_defect();
    if asymmetry > tol {
        return Ok(PsdCheck {
            check: Check::skipped(
                name,
                format!("Gram matrix not Hermitian, max asymmetry {asymmetry:.3e}"),
            ),
            min_eigenvalue: None,
        });
    }
    let min = gram.eigenvalues().first().copied().unwrap_or(0.0);
    let defect = (-min).max(0.0);
    Ok(PsdCheck {
        check: Check::from_defect(name, defect, tol),
        min_eigenvalue: Some(min),
    })
}

/// The three exchange relations of a braided model, each checked up to the
/// Gram kernel: a defect vector passes when `|G d| <= tol`.
pub fn check_braid_exchange_relations(
    model: &ParticleModel,
    n_max: usize,
    tol: f64,
) -> Result<CheckReport, FockError> {
    let n = model.n_generators();
    let mut worst = [0.0f64; 3];
    let mut witness: [Option<String>; 3] = [None, None, None];
    let mut record = |slot: usize, d: f64, what: String| {
        if d > worst[slot] {
            worst[slot] = d;
            witness[slot] = Some(what);
        }
    };
    for len in 0..=n_max {
        for w in basis_words(model, len)? {
            let v = FockVector::basis(w.clone());
            for i in 0..n {
                for j in 0..n {
                    let tag = format!("i={}, j={}, word={}", i + 1, j + 1, w);

                    let mixed = commutator_residual(model, i, j, &v)?;
                    record(0, gram_norm(model, &mixed)?, tag.clone());

                    let mut cc = create(model, i, &create(model, j, &v)?)?;
                    for t in model.braid_terms(i, j) {
                        let term = create(model, t.first, &create(model, t.second, &v)?)?;
                        cc = &cc - &term.scale(t.coef);
                    }
                    record(1, gram_norm(model, &cc)?, tag.clone());

                    let mut aa = annihilate_twisted(model, i, &annihilate_twisted(model, j, &v)?)?;
                    for t in model.dual_braid_terms(i, j) {
                        let term = annihilate_twisted(
                            model,
                            t.first,
                            &annihilate_twisted(model, t.second, &v)?,
                        )?;
                        aa = &aa - &term.scale(t.coef);
                    }
                    record(2, gram_norm(model, &aa)?, tag);
                }
            }
        }
    }
    let names = [
        "exchange:annihilator_creator",
        "exchange:creator_creator",
        "exchange:annihilator_annihilator",
    ];
    let mut report = CheckReport::new();
    for k in 0..3 {
        let mut c = Check::from_defect(names[k], worst[k], tol);
        if let Some(w) = witness[k].take() {
            c = c.with_witness(w);
        }
        report.push(c);
    }
    Ok(report)
}

/// One elementary process. Indices and positions are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Create(usize),
    AnnihilateFree(usize),
    AnnihilateTwisted(usize),
    Exchange(usize),
    Scale(Complex64),
}

/// A sequence of elementary processes applied left to right.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProcessProgram {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad program step {step:?} at position {index}: {reason}")]
pub struct ProgramSyntaxError {
    pub index: usize,
    pub step: String,
    pub reason: &'static str,
}

impl FromStr for ProcessProgram {
    type Err = ProgramSyntaxError;

    /// `c1;c2;x1;b2`: `cI` create, `aI` free annihilate, `bI` twisted
    /// annihilate, `xK` exchange letters `K, K+1`, `sF` scale by a real number.
    /// Indices are 1-based in this syntax.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut steps = Vec::new();
        for (index, raw) in s.split(';').enumerate() {
            let tok = raw.trim();
            if tok.is_empty() {
                if s.trim().is_empty() {
                    break;
                }
                return Err(ProgramSyntaxError {
                    index,
                    step: raw.to_string(),
                    reason: "empty step",
                });
            }
            let err = |reason| ProgramSyntaxError {
                index,
                step: tok.to_string(),
                reason,
            };
            let (kind, arg) = tok.split_at(1);
            let step = if kind == "s" {
                let c: f64 = arg
                    .parse()
                    .map_err(|_| err("expected a number after 's'"))?;
                Step::Scale(Complex64::new(c, 0.0))
            } else {
                let k: usize = arg
                    .parse()
                    .map_err(|_| err("expected a positive integer"))?;
                if k == 0 {
                    return Err(err("indices are 1-based"));
                }
                match kind {
                    "c" => Step::Create(k - 1),
                    "a" => Step::AnnihilateFree(k - 1),
                    "b" => Step::AnnihilateTwisted(k - 1),
                    "x" => Step::Exchange(k - 1),
                    _ => return Err(err("unknown step kind, expected one of c, a, b, x, s")),
                }
            };
            steps.push(step);
        }
        Ok(ProcessProgram { steps })
    }
}

impl fmt::Display for ProcessProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Create(i) => format!("c{}", i + 1),
                Step::AnnihilateFree(i) => format!("a{}", i + 1),
                Step::AnnihilateTwisted(i) => format!("b{}", i + 1),
                Step::Exchange(k) => format!("x{}", k + 1),
                Step::Scale(c) => format!("s{}", c.re),
            })
            .collect();
        f.write_str(&parts.join(";"))
    }
}

pub fn apply_program(
    model: &ParticleModel,
    program: &ProcessProgram,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    program
        .steps
        .iter()
        .try_fold(v.clone(), |acc, step| match *step {
            Step::Create(i) => create(model, i, &acc),
            Step::AnnihilateFree(i) => annihilate_free(model, i, &acc),
            Step::AnnihilateTwisted(i) => annihilate_twisted(model, i, &acc),
            Step::Exchange(k) => {
                if acc.is_zero() {
                    // still validate the position against an empty word
                    return Err(ModelError::Position { pos: k, len: 0 }.into());
                }
                exchange(model, k, &acc)
            }
            Step::Scale(c) => Ok(acc.scale(c)),
        })
}
