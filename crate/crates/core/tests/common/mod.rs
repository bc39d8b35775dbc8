//! Reference computations shared by the integration tests. Nothing here calls
//! the library's Fock operators.

#![allow(dead_code)]

use num_complex::Complex64;
use statcat::{ParticleModel, TensorWord};

/// Gram entry by summing over the bijections `pi` with `w[t] = w2[pi(t)]`.
///
/// Annihilating `w[t]` has to carry its dual past every letter still sitting
/// to the left of position `pi(t)`; those are the letters `w[s]`, `s > t`,
/// with `pi(s) < pi(t)`. Each such pass contributes `eps(gamma_{w[s]}, -gamma_{w[t]})`.
/// Requires a grade-diagonal model with identity pairing.
pub fn gram_entry_by_permutations(
    model: &ParticleModel,
    w: &TensorWord,
    w2: &TensorWord,
) -> Complex64 {
    let (a, b) = (w.letters(), w2.letters());
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let eps = model.bicharacter();
    let grades = model.grades();
    let cross = |passed: usize, dual: usize| {
        eps.eval(&grades[passed], &grades[dual].neg())
            .expect("grades live in the model group")
            .to_complex()
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut pi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        t: usize,
        a: &[usize],
        b: &[usize],
        pi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        total: &mut Complex64,
        cross: &dyn Fn(usize, usize) -> Complex64,
    ) {
        let n = a.len();
        if t == n {
            let mut amp = Complex64::new(1.0, 0.0);
            for t in 0..n {
                for s in t + 1..n {
                    if pi[s] < pi[t] {
                        amp *= cross(a[s], a[t]);
                    }
                }
            }
            *total += amp;
            return;
        }
        for p in 0..n {
            if !used[p] && b[p] == a[t] {
                used[p] = true;
                pi[t] = p;
                go(t + 1, a, b, pi, used, total, cross);
                used[p] = false;
            }
        }
    }
    go(0, a, b, &mut pi, &mut used, &mut total, &cross);
    total
}

/// Largest entrywise difference between the library Gram matrix of sector `n`
/// and the permutation-sum reference.
pub fn gram_oracle_gap(model: &ParticleModel, n: usize) -> f64 {
    let gram = statcat::fock::gram_matrix(model, n).expect("sector within the guard");
    let mut worst: f64 = 0.0;
    for (i, w) in gram.words.iter().enumerate() {
        for (j, w2) in gram.words.iter().enumerate() {
            let d = (gram.matrix[(i, j)] - gram_entry_by_permutations(model, w, w2)).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Grade-diagonal bundled models with identity pairing.
pub fn grade_diagonal_zoo() -> Vec<(&'static str, ParticleModel)> {
    statcat::zoo::bundled()
        .into_iter()
        .filter(|(_, m)| m.is_grade_diagonal())
        .collect()
}
