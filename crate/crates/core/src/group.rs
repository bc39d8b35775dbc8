//! Finite Abelian grading groups, homomorphisms between them, and bicharacters
//! with exact rational phases.
//!
//! A group is a product of cyclic factors `Z_{n_1} x ... x Z_{n_k}` written
//! additively. A bicharacter is stored as a `k x k` matrix `Q` of phases and
//! evaluates as `eps(a, b) = exp(2 pi i sum_ij a_i Q_ij b_j)`. Everything in
//! this module is exact; floating point only appears in
//! [`RationalPhase::to_complex`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use thiserror::Error;

use crate::report::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid order {order} for cyclic factor {index}: orders must be >= 1")]
    InvalidOrder { index: usize, order: i64 },
    #[error("element has {got} components but the group has {expected} cyclic factors")]
    RankMismatch { expected: usize, got: usize },
    #[error("residue {residue} out of range for factor {index} of order {order}")]
    ResidueOutOfRange {
        index: usize,
        residue: i64,
        order: u64,
    },
    #[error("elements belong to different groups ({left} vs {right})")]
    GroupMismatch { left: GroupSpec, right: GroupSpec },
    #[error(
        "phase matrix must be {expected}x{expected}, got {rows} rows with lengths {row_lengths:?}"
    )]
    MatrixShape {
        expected: usize,
        rows: usize,
        row_lengths: Vec<usize>,
    },
    #[error("invalid bicharacter entry Q[{row}][{col}] = {entry}: {reason}")]
    InvalidBicharacter {
        row: usize,
        col: usize,
        entry: RationalPhase,
        reason: String,
    },
    #[error("not a homomorphism: generator {generator} has order {order} but {order}*h(e_{generator}) = {image_multiple} != 0")]
    NotAHomomorphism {
        generator: usize,
        order: u64,
        image_multiple: GroupElement,
    },
    #[error("homomorphism has {got} generator images, source group has rank {expected}")]
    ImageCount { expected: usize, got: usize },
    #[error("invalid phase {0:?}: expected an integer or a fraction p/q with q >= 1")]
    PhaseSyntax(String),
}

/// `exp(2 pi i num/den)`, kept as a reduced fraction in `[0, 1)`.
///
/// Addition of phases is multiplication of the unit complex numbers they
/// denote, negation is inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };

    /// Builds `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        Self::reduce(num as i128, den as i128)
    }

    fn reduce(num: i128, den: i128) -> Self {
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        num = num.rem_euclid(den);
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        RationalPhase {
            num: num as i64,
            den: den as i64,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True iff `k * self` is an integer, i.e. the phase is a `k`-th root of unity.
    pub fn is_killed_by(&self, k: u64) -> bool {
        (self.num as i128 * k as i128) % self.den as i128 == 0
    }

    /// The unit complex number this phase denotes. Quarter turns are exact.
    pub fn to_complex(&self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (n, d) => {
                let theta = std::f64::consts::TAU * n as f64 / d as f64;
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }
}

impl Default for RationalPhase {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for RationalPhase {
    type Output = RationalPhase;
    fn add(self, rhs: RationalPhase) -> RationalPhase {
        let l = (self.den as i128).lcm(&(rhs.den as i128));
        let n = self.num as i128 * (l / self.den as i128) + rhs.num as i128 * (l / rhs.den as i128);
        Self::reduce(n, l)
    }
}

impl Neg for RationalPhase {
    type Output = RationalPhase;
    fn neg(self) -> RationalPhase {
        Self::reduce(-(self.num as i128), self.den as i128)
    }
}

impl Sub for RationalPhase {
    type Output = RationalPhase;
    fn sub(self, rhs: RationalPhase) -> RationalPhase {
        self + (-rhs)
    }
}

impl Mul<i64> for RationalPhase {
    type Output = RationalPhase;
    fn mul(self, k: i64) -> RationalPhase {
        Self::reduce(self.num as i128 * k as i128, self.den as i128)
    }
}

impl std::iter::Sum for RationalPhase {
    fn sum<I: Iterator<Item = RationalPhase>>(iter: I) -> Self {
        iter.fold(RationalPhase::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalPhase {
    type Err = GroupError;

    /// Accepts `"p/q"` or a bare integer. The result is reduced mod 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::PhaseSyntax(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<i64>().map_err(|_| bad())?,
                d.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (t.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if d < 1 {
            return Err(bad());
        }
        Ok(RationalPhase::new(n, d))
    }
}

/// `Z_{n_1} x ... x Z_{n_k}`. The empty product is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Arc<[u64]>,
}

impl GroupSpec {
    pub fn new(orders: &[i64]) -> Result<Self, GroupError> {
        let mut checked = Vec::with_capacity(orders.len());
        for (index, &order) in orders.iter().enumerate() {
            if order < 1 {
                return Err(GroupError::InvalidOrder { index, order });
            }
            checked.push(order as u64);
        }
        Ok(GroupSpec {
            orders: checked.into(),
        })
    }

    pub fn trivial() -> Self {
        GroupSpec {
            orders: Arc::from(Vec::new()),
        }
    }

    /// Cyclic group `Z_n`. Panics if `n == 0`.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        GroupSpec {
            orders: Arc::from(vec![n]),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            residues: vec![0; self.rank()],
        }
    }

    /// The `i`-th standard generator `e_i`.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut residues = vec![0; self.rank()];
        residues[i] = 1 % self.orders[i];
        GroupElement {
            group: self.clone(),
            residues,
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.rank()).map(|i| self.generator(i))
    }

    /// Element from arbitrary integer representatives, reduced mod each order.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_rank(residues.len())?;
        let residues = residues
            .iter()
            .zip(self.orders.iter())
            .map(|(&a, &n)| a.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            residues,
        })
    }

    /// Element from residues that must already satisfy `0 <= a_i < n_i`.
    pub fn checked_element(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_rank(residues.len())?;
        for (index, (&a, &order)) in residues.iter().zip(self.orders.iter()).enumerate() {
            if a < 0 || a as u64 >= order {
                return Err(GroupError::ResidueOutOfRange {
                    index,
                    residue: a,
                    order,
                });
            }
        }
        self.element(residues)
    }

    /// All elements in lexicographic residue order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (i, &n) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in &out {
                for a in 0..n {
                    let mut r = e.residues.clone();
                    r[i] = a;
                    next.push(GroupElement {
                        group: self.clone(),
                        residues: r,
                    });
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.residues.cmp(&b.residues));
        out
    }

    fn check_rank(&self, got: usize) -> Result<(), GroupError> {
        if got != self.rank() {
            return Err(GroupError::RankMismatch {
                expected: self.rank(),
                got,
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &GroupSpec) -> Result<(), GroupError> {
        if self != other {
            return Err(GroupError::GroupMismatch {
                left: self.clone(),
                right: other.clone(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: GroupSpec,
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.group.ensure_same(&other.group)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .zip(self.group.orders.iter())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(GroupElement {
            group: self.group.clone(),
            residues,
        })
    }

    pub fn neg(&self) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&a, &n)| (n - a) % n)
            .collect();
        GroupElement {
            group: self.group.clone(),
            residues,
        }
    }

    /// `k * self`.
    pub fn scale(&self, k: i64) -> GroupElement {
        let residues = self
            .residues
            .iter()
            .zip(self.group.orders.iter())
            .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
            .collect();
        GroupElement {
            group: self.group.clone(),
            residues,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `eps(a, b) = exp(2 pi i sum_ij a_i Q_ij b_j)` on a finite Abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter {
    group: GroupSpec,
    q: Vec<Vec<RationalPhase>>,
}

impl Bicharacter {
    /// Validates `n_i Q_ij` and `Q_ij n_j` are integers for every entry, which
    /// is exactly what makes the formula independent of residue representatives.
    pub fn new(group: GroupSpec, q: Vec<Vec<RationalPhase>>) -> Result<Self, GroupError> {
        let k = group.rank();
        if q.len() != k || q.iter().any(|row| row.len() != k) {
            return Err(GroupError::MatrixShape {
                expected: k,
                rows: q.len(),
                row_lengths: q.iter().map(Vec::len).collect(),
            });
        }
        let orders = group.orders();
        for (i, row) in q.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                if !entry.is_killed_by(orders[i]) {
                    return Err(GroupError::InvalidBicharacter {
                        row: i,
                        col: j,
                        entry,
                        reason: format!("{} * {} is not an integer", orders[i], entry),
                    });
                }
                if !entry.is_killed_by(orders[j]) {
                    return Err(GroupError::InvalidBicharacter {
                        row: i,
                        col: j,
                        entry,
                        reason: format!("{} * {} is not an integer", entry, orders[j]),
                    });
                }
            }
        }
        Ok(Bicharacter { group, q })
    }

    pub fn trivial(group: GroupSpec) -> Self {
        let k = group.rank();
        Bicharacter {
            group,
            q: vec![vec![RationalPhase::ZERO; k]; k],
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<RationalPhase>] {
        &self.q
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Result<RationalPhase, GroupError> {
        self.group.ensure_same(&a.group)?;
        self.group.ensure_same(&b.group)?;
        let a: Vec<i64> = a.residues.iter().map(|&x| x as i64).collect();
        let b: Vec<i64> = b.residues.iter().map(|&x| x as i64).collect();
        Ok(self.eval_raw(&a, &b))
    }

    /// Evaluates the defining formula on arbitrary integer representatives,
    /// without reducing them first. Panics on a rank mismatch.
    pub fn eval_raw(&self, a: &[i64], b: &[i64]) -> RationalPhase {
        assert_eq!(a.len(), self.group.rank());
        assert_eq!(b.len(), self.group.rank());
        let mut total = RationalPhase::ZERO;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                total = total + self.q[i][j] * (ai * bj);
            }
        }
        total
    }

    /// Checks `eps(e_i, e_j) eps(e_j, e_i) = 1` on generator pairs, which by
    /// bilinearity is equivalent to the condition on all pairs.
    pub fn is_normalized(&self) -> Verdict<(GroupElement, GroupElement)> {
        let k = self.group.rank();
        for i in 0..k {
            for j in i..k {
                if !(self.q[i][j] + self.q[j][i]).is_zero() {
                    return Verdict::Fails((self.group.generator(i), self.group.generator(j)));
                }
            }
        }
        Verdict::Holds
    }

    /// Exhaustive check over all triples of elements: additivity in each
    /// argument, and invariance under shifting either argument's raw
    /// representative by a multiple of a cyclic order. Costs `|G|^3`.
    pub fn check_laws(&self) -> Verdict<String> {
        let elems = self.group.elements();
        let orders = self.group.orders();
        let raw = |g: &GroupElement| -> Vec<i64> { g.residues.iter().map(|&x| x as i64).collect() };
        // position of an element in `elems`, which is sorted lexicographically
        let index = |g: &GroupElement| {
            g.residues
                .iter()
                .zip(orders)
                .fold(0usize, |acc, (&r, &n)| acc * n as usize + r as usize)
        };
        let size = elems.len();
        let mut table = vec![RationalPhase::ZERO; size * size];
        for a in &elems {
            for b in &elems {
                let ab = self.eval_raw(&raw(a), &raw(b));
                table[index(a) * size + index(b)] = ab;
                for (i, &n) in orders.iter().enumerate() {
                    let mut shifted = raw(a);
                    shifted[i] += n as i64;
                    if self.eval_raw(&shifted, &raw(b)) != ab {
                        return Verdict::Fails(format!(
                            "left representative of {a} shifted along factor {i}"
                        ));
                    }
                    let mut shifted = raw(b);
                    shifted[i] -= n as i64;
                    if self.eval_raw(&raw(a), &shifted) != ab {
                        return Verdict::Fails(format!(
                            "right representative of {b} shifted along factor {i}"
                        ));
                    }
                }
            }
        }
        let eps = |x: usize, y: usize| table[x * size + y];
        for a in &elems {
            for b in &elems {
                let (ia, ib) = (index(a), index(b));
                let sum = index(&a.add(b).expect("same group"));
                for (ic, c) in elems.iter().enumerate() {
                    if eps(sum, ic) != eps(ia, ic) + eps(ib, ic) {
                        return Verdict::Fails(format!(
                            "eps({a}+{b}, {c}) != eps({a}, {c}) eps({b}, {c})"
                        ));
                    }
                    if eps(ic, sum) != eps(ic, ia) + eps(ic, ib) {
                        let c = &elems[ic];
                        return Verdict::Fails(format!(
                            "eps({c}, {a}+{b}) != eps({c}, {a}) eps({c}, {b})"
                        ));
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// `Q_ij`, i.e. `eps(e_i, e_j)`.
    pub fn entry(&self, i: usize, j: usize) -> RationalPhase {
        self.q[i][j]
    }
}

/// A homomorphism given by the images of the standard generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: GroupSpec,
    target: GroupSpec,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(
        source: GroupSpec,
        target: GroupSpec,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if images.len() != source.rank() {
            return Err(GroupError::ImageCount {
                expected: source.rank(),
                got: images.len(),
            });
        }
        for (generator, img) in images.iter().enumerate() {
            target.ensure_same(img.group())?;
            let order = source.orders()[generator];
            let multiple = img.scale(order as i64);
            if !multiple.is_zero() {
                return Err(GroupError::NotAHomomorphism {
                    generator,
                    order,
                    image_multiple: multiple,
                });
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(group: &GroupSpec) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            images: group.generators().collect(),
        }
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// `h(a) = sum_i a_i h(e_i)`.
    pub fn apply(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.source.ensure_same(a.group())?;
        let mut out = self.target.zero();
        for (img, &ai) in self.images.iter().zip(a.residues()) {
            out = out.add(&img.scale(ai as i64))?;
        }
        Ok(out)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &GroupHom) -> Result<GroupHom, GroupError> {
        self.target.ensure_same(&then.source)?;
        let images = self
            .images
            .iter()
            .map(|img| then.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        GroupHom::new(self.source.clone(), then.target.clone(), images)
    }
}

/// Counterexample to `eps(a, b) = eps'(h(a), h(b))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub left: GroupElement,
    pub right: GroupElement,
    pub source_value: RationalPhase,
    pub target_value: RationalPhase,
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): eps = exp(2pi i {}) vs eps' = exp(2pi i {})",
            self.left, self.right, self.source_value, self.target_value
        )
    }
}

/// Whether `h` carries `eps` onto `eps_target`, checked on generator pairs.
pub fn check_transmutation(
    h: &GroupHom,
    eps: &Bicharacter,
    eps_target: &Bicharacter,
) -> Result<Verdict<PairWitness>, GroupError> {
    h.source.ensure_same(eps.group())?;
    h.target.ensure_same(eps_target.group())?;
    let k = h.source.rank();
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (h.source.generator(i), h.source.generator(j));
            let source_value = eps.entry(i, j);
            let target_value = eps_target.eval(&h.images[i], &h.images[j])?;
            if source_value != target_value {
                return Ok(Verdict::Fails(PairWitness {
                    left: a,
                    right: b,
                    source_value,
                    target_value,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}
