//! Standard models. The JSON files under `models/` describe the same data.

use num_complex::Complex64;

use crate::group::{Bicharacter, GroupSpec, RationalPhase};
use crate::model::{identity_pairing, scaled_swap, BraidSpec, CrossSpec, ParticleModel};

fn phase(s: &str) -> RationalPhase {
    s.parse().expect("valid phase literal")
}

/// `n` bosons: trivial grading.
pub fn boson(n: usize) -> ParticleModel {
    let g = GroupSpec::trivial();
    ParticleModel::grade_diagonal(
        Bicharacter::trivial(g.clone()),
        vec![g.zero(); n],
        identity_pairing(n),
    )
    .expect("valid boson model")
}

/// `n` fermions: every generator odd under `Z_2` with `Q = [[1/2]]`.
pub fn fermion(n: usize) -> ParticleModel {
    let g = GroupSpec::cyclic(2);
    let eps = Bicharacter::new(g.clone(), vec![vec![phase("1/2")]]).expect("valid Z2 bicharacter");
    ParticleModel::grade_diagonal(eps, vec![g.generator(0); n], identity_pairing(n))
        .expect("valid fermion model")
}

/// Two fermions graded by `(1,0)` and `(0,1)` in `Z_2 x Z_2`, all `Q` entries `1/2`.
pub fn z2z2_fermion() -> ParticleModel {
    let g = GroupSpec::new(&[2, 2]).expect("valid orders");
    let half = phase("1/2");
    let eps = Bicharacter::new(g.clone(), vec![vec![half, half], vec![half, half]])
        .expect("valid Z2xZ2 bicharacter");
    let grades = vec![g.generator(0), g.generator(1)];
    ParticleModel::grade_diagonal(eps, grades, identity_pairing(2)).expect("valid model")
}

/// `n` generators of grade 1 in `Z_4` with `Q = [[1/4]]`; not normalized.
pub fn anyon_z4(n: usize) -> ParticleModel {
    let g = GroupSpec::cyclic(4);
    let eps = Bicharacter::new(g.clone(), vec![vec![phase("1/4")]]).expect("valid Z4 bicharacter");
    ParticleModel::grade_diagonal(eps, vec![g.generator(0); n], identity_pairing(n))
        .expect("valid anyon model")
}

/// Two generators with braid `q * swap` and the derived cross symmetry.
pub fn quon(q: f64) -> ParticleModel {
    let g = GroupSpec::trivial();
    ParticleModel::new(
        Bicharacter::trivial(g.clone()),
        vec![g.zero(); 2],
        identity_pairing(2),
        BraidSpec::Matrix(scaled_swap(2, Complex64::new(q, 0.0))),
        CrossSpec::DerivedFromBraid,
    )
    .expect("valid quon model")
}

/// Every bundled model with its file stem under `models/`.
pub fn bundled() -> Vec<(&'static str, ParticleModel)> {
    vec![
        ("boson", boson(2)),
        ("fermion1", fermion(1)),
        ("fermion2", fermion(2)),
        ("fermion", fermion(3)),
        ("z2_fermion", fermion(1)),
        ("z2z2_fermion", z2z2_fermion()),
        ("anyon_z4", anyon_z4(2)),
        ("quon_q03", quon(0.3)),
        ("quon_q05", quon(0.5)),
        ("quon_q09", quon(0.9)),
    ]
}
