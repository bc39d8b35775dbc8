//! Monoidal expressions with unit and duals, and their normal forms.
//!
//! Surface syntax: `(x)` for the tensor product, postfix `^` for the dual,
//! `I` for the unit. Chains of `(x)` parse left-associatively. The lexer reads
//! `(x)` as the tensor token, so an atom named `x` cannot be parenthesized
//! on its own.
//!
//! Normalization rewrites with
//!
//! ```text
//! (a (x) b) (x) c -> a (x) (b (x) c)
//! I (x) a         -> a
//! a (x) I         -> a
//! (a (x) b)^      -> b^ (x) a^
//! a^^             -> a
//! I^              -> I
//! ```
//!
//! until no rule applies.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::report::{Check, CheckReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TensorExpr {
    Atom(String),
    Unit,
    Tensor(Box<TensorExpr>, Box<TensorExpr>),
    Dual(Box<TensorExpr>),
}

impl TensorExpr {
    pub fn atom(name: &str) -> Self {
        TensorExpr::Atom(name.to_string())
    }

    pub fn tensor(a: TensorExpr, b: TensorExpr) -> Self {
        TensorExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn dual(a: TensorExpr) -> Self {
        TensorExpr::Dual(Box::new(a))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            TensorExpr::Atom(_) | TensorExpr::Unit => 1,
            TensorExpr::Tensor(a, b) => 1 + a.size() + b.size(),
            TensorExpr::Dual(a) => 1 + a.size(),
        }
    }
}

/// Parenthesized so that [`parse_expr`] reads it back to the same tree.
impl fmt::Display for TensorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorExpr::Atom(name) => f.write_str(name),
            TensorExpr::Unit => f.write_str("I"),
            TensorExpr::Tensor(a, b) => match **b {
                TensorExpr::Tensor(..) => write!(f, "{a} (x) ({b})"),
                _ => write!(f, "{a} (x) {b}"),
            },
            TensorExpr::Dual(a) => match **a {
                TensorExpr::Tensor(..) => write!(f, "({a})^"),
                _ => write!(f, "{a}^"),
            },
        }
    }
}

/// An atom, possibly dualized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf {
    pub name: String,
    pub dual: bool,
}

/// A right-nested tensor of leaves; no leaves means the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NormalForm {
    leaves: Vec<Leaf>,
}

impl NormalForm {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn from_leaves(leaves: Vec<Leaf>) -> Self {
        NormalForm { leaves }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn is_unit(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn to_expr(&self) -> TensorExpr {
        let leaf = |l: &Leaf| {
            let a = TensorExpr::atom(&l.name);
            if l.dual {
                TensorExpr::dual(a)
            } else {
                a
            }
        };
        match self.leaves.split_last() {
            None => TensorExpr::Unit,
            Some((last, init)) => init
                .iter()
                .rev()
                .fold(leaf(last), |acc, l| TensorExpr::tensor(leaf(l), acc)),
        }
    }

    /// Reads a fully rewritten expression. `None` if `e` still has a redex
    /// shape that a normal form cannot contain.
    pub fn from_expr(e: &TensorExpr) -> Option<Self> {
        fn leaf(e: &TensorExpr) -> Option<Leaf> {
            match e {
                TensorExpr::Atom(n) => Some(Leaf {
                    name: n.clone(),
                    dual: false,
                }),
                TensorExpr::Dual(inner) => match &**inner {
                    TensorExpr::Atom(n) => Some(Leaf {
                        name: n.clone(),
                        dual: true,
                    }),
                    _ => None,
                },
                _ => None,
            }
        }
        if *e == TensorExpr::Unit {
            return Some(Self::unit());
        }
        let mut leaves = Vec::new();
        let mut cur = e;
        while let TensorExpr::Tensor(a, b) = cur {
            leaves.push(leaf(a)?);
            cur = b;
        }
        leaves.push(leaf(cur)?);
        Some(NormalForm { leaves })
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.leaves.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self
            .leaves
            .iter()
            .map(|l| {
                if l.dual {
                    format!("{}^", l.name)
                } else {
                    l.name.clone()
                }
            })
            .collect();
        f.write_str(&parts.join(" (x) "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Tensor,
    Open,
    Close,
    Caret,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let skip_ws = |mut k: usize| {
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        k
    };
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        k = skip_ws(k);
        let Some(&(pos, c)) = chars.get(k) else { break };
        match c {
            '(' => {
                let x = skip_ws(k + 1);
                let close = skip_ws(x + 1);
                if chars.get(x).map(|p| p.1) == Some('x')
                    && chars.get(close).map(|p| p.1) == Some(')')
                {
                    out.push((pos, Token::Tensor));
                    k = close + 1;
                } else {
                    out.push((pos, Token::Open));
                    k += 1;
                }
            }
            ')' => {
                out.push((pos, Token::Close));
                k += 1;
            }
            '^' => {
                out.push((pos, Token::Caret));
                k += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                let name: String = chars[start..k].iter().map(|p| p.1).collect();
                out.push((pos, Token::Ident(name)));
            }
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |t| t.0)
    }

    fn error(&self, message: &str) -> ParseError {
        let what = if self.at >= self.tokens.len() {
            format!("{message}, found end of input")
        } else {
            message.to_string()
        };
        ParseError {
            pos: self.pos(),
            message: what,
        }
    }

    fn expr(&mut self) -> Result<TensorExpr, ParseError> {
        let mut e = self.term()?;
        while self.peek() == Some(&Token::Tensor) {
            self.at += 1;
            e = TensorExpr::tensor(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<TensorExpr, ParseError> {
        let mut e = self.primary()?;
        while self.peek() == Some(&Token::Caret) {
            self.at += 1;
            e = TensorExpr::dual(e);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<TensorExpr, ParseError> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.at += 1;
                Ok(if name == "I" {
                    TensorExpr::Unit
                } else {
                    TensorExpr::Atom(name)
                })
            }
            Some(Token::Open) => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected ')'"));
                }
                self.at += 1;
                Ok(e)
            }
            _ => Err(self.error("expected an atom, 'I' or '('")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<TensorExpr, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.at < p.tokens.len() {
        return Err(p.error("expected '(x)' or end of input"));
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Assoc,
    UnitLeft,
    UnitRight,
    DualTensor,
    DualDual,
    DualUnit,
}

pub const ALL_RULES: [Rule; 6] = [
    Rule::Assoc,
    Rule::UnitLeft,
    Rule::UnitRight,
    Rule::DualTensor,
    Rule::DualDual,
    Rule::DualUnit,
];

impl Rule {
    fn apply(self, e: &TensorExpr) -> Option<TensorExpr> {
        use TensorExpr::*;
        match (self, e) {
            (Rule::Assoc, Tensor(ab, c)) => match &**ab {
                Tensor(a, b) => Some(TensorExpr::tensor(
                    (**a).clone(),
                    TensorExpr::tensor((**b).clone(), (**c).clone()),
                )),
                _ => None,
            },
            (Rule::UnitLeft, Tensor(i, a)) if **i == Unit => Some((**a).clone()),
            (Rule::UnitRight, Tensor(a, i)) if **i == Unit => Some((**a).clone()),
            (Rule::DualTensor, Dual(inner)) => match &**inner {
                Tensor(a, b) => Some(TensorExpr::tensor(
                    TensorExpr::dual((**b).clone()),
                    TensorExpr::dual((**a).clone()),
                )),
                _ => None,
            },
            (Rule::DualDual, Dual(inner)) => match &**inner {
                Dual(a) => Some((**a).clone()),
                _ => None,
            },
            (Rule::DualUnit, Dual(inner)) if **inner == Unit => Some(Unit),
            _ => None,
        }
    }
}

/// A rule applicable at a subterm, addressed by child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub path: Vec<u8>,
    pub rule: Rule,
}

/// Redexes in pre-order (outermost first, left before right), rules tried in
/// the order given.
pub fn redexes(e: &TensorExpr, rules: &[Rule]) -> Vec<Redex> {
    fn walk(e: &TensorExpr, rules: &[Rule], path: &mut Vec<u8>, out: &mut Vec<Redex>) {
        for &rule in rules {
            if rule.apply(e).is_some() {
                out.push(Redex {
                    path: path.clone(),
                    rule,
                });
            }
        }
        match e {
            TensorExpr::Tensor(a, b) => {
                path.push(0);
                walk(a, rules, path, out);
                path.pop();
                path.push(1);
                walk(b, rules, path, out);
                path.pop();
            }
            TensorExpr::Dual(a) => {
                path.push(0);
                walk(a, rules, path, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(e, rules, &mut Vec::new(), &mut out);
    out
}

/// Applies one redex. Panics if `redex` does not come from [`redexes`] on `e`.
pub fn rewrite_at(e: &TensorExpr, redex: &Redex) -> TensorExpr {
    fn go(e: &TensorExpr, path: &[u8], rule: Rule) -> TensorExpr {
        match (path.split_first(), e) {
            (None, _) => rule.apply(e).expect("redex does not match"),
            (Some((0, rest)), TensorExpr::Tensor(a, b)) => {
                TensorExpr::Tensor(Box::new(go(a, rest, rule)), b.clone())
            }
            (Some((1, rest)), TensorExpr::Tensor(a, b)) => {
                TensorExpr::Tensor(a.clone(), Box::new(go(b, rest, rule)))
            }
            (Some((0, rest)), TensorExpr::Dual(a)) => TensorExpr::Dual(Box::new(go(a, rest, rule))),
            _ => panic!("redex path does not match the expression"),
        }
    }
    go(e, &redex.path, redex.rule)
}

/// How the next redex is chosen.
pub enum Strategy<'a> {
    /// First redex in pre-order.
    Canonical,
    /// Uniformly random among all redexes.
    Random(&'a mut ChaCha8Rng),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rewriting {expr} did not terminate within {cap} steps")]
pub struct StepCapExceeded {
    pub expr: String,
    pub cap: usize,
}

/// `10 m^2` for an expression of `m` nodes.
pub fn step_cap(e: &TensorExpr) -> usize {
    let m = e.size();
    10 * m * m
}

/// Rewrites until no rule in `rules` applies.
pub fn rewrite_to_irreducible(
    e: &TensorExpr,
    rules: &[Rule],
    strategy: Strategy<'_>,
) -> Result<TensorExpr, StepCapExceeded> {
    let cap = step_cap(e);
    let mut cur = e.clone();
    let mut rng = match strategy {
        Strategy::Canonical => None,
        Strategy::Random(r) => Some(r),
    };
    for _ in 0..=cap {
        let found = redexes(&cur, rules);
        let pick = match (&mut rng, found.first()) {
            (_, None) => return Ok(cur),
            (None, Some(first)) => first,
            (Some(r), Some(_)) => found.choose(*r).expect("nonempty"),
        };
        cur = rewrite_at(&cur, pick);
    }
    Err(StepCapExceeded {
        expr: e.to_string(),
        cap,
    })
}

pub fn normalize(e: &TensorExpr) -> NormalForm {
    let done = rewrite_to_irreducible(e, &ALL_RULES, Strategy::Canonical)
        .unwrap_or_else(|err| panic!("rewrite system failed to terminate: {err}"));
    NormalForm::from_expr(&done).expect("irreducible expression is a normal form")
}

/// Coherence never permutes factors: equality of normal forms only.
pub fn equal_up_to_coherence(a: &TensorExpr, b: &TensorExpr) -> bool {
    normalize(a) == normalize(b)
}

/// Reference normal form computed structurally: leaves read left to right,
/// order reversed and parity flipped under each dual, units dropped.
pub fn flatten(e: &TensorExpr) -> NormalForm {
    fn go(e: &TensorExpr, dual: bool, out: &mut Vec<Leaf>) {
        match e {
            TensorExpr::Atom(n) => out.push(Leaf {
                name: n.clone(),
                dual,
            }),
            TensorExpr::Unit => {}
            TensorExpr::Tensor(a, b) => {
                let (first, second) = if dual { (b, a) } else { (a, b) };
                go(first, dual, out);
                go(second, dual, out);
            }
            TensorExpr::Dual(a) => go(a, !dual, out),
        }
    }
    let mut leaves = Vec::new();
    go(e, false, &mut leaves);
    NormalForm::from_leaves(leaves)
}

const ATOMS: [&str; 4] = ["A", "B", "C", "D"];

/// Random expression with exactly `size` nodes (at least one).
pub fn random_expr(rng: &mut ChaCha8Rng, size: usize) -> TensorExpr {
    if size <= 1 {
        return if rng.random_bool(0.15) {
            TensorExpr::Unit
        } else {
            TensorExpr::atom(ATOMS[rng.random_range(0..ATOMS.len())])
        };
    }
    if size == 2 || rng.random_bool(0.3) {
        return TensorExpr::dual(random_expr(rng, size - 1));
    }
    let left = rng.random_range(1..size - 1);
    TensorExpr::tensor(random_expr(rng, left), random_expr(rng, size - 1 - left))
}

/// Fuzzes [`coherence_fuzz_with`] on the full rule set.
pub fn coherence_fuzz(seed: u64, size: usize, trials: usize) -> CheckReport {
    coherence_fuzz_with(&ALL_RULES, seed, size, trials)
}

/// For `trials` random expressions of at most `size` nodes: random-order and
/// canonical-order rewriting must terminate, agree with each other and with
/// [`flatten`], and the result must be stable under renormalization.
pub fn coherence_fuzz_with(rules: &[Rule], seed: u64, size: usize, trials: usize) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: [Option<String>; 4] = [None, None, None, None];
    let mut counts = [0usize; 4];
    let mut fail = |slot: usize, witness: String| {
        counts[slot] += 1;
        failures[slot].get_or_insert(witness);
    };
    for _ in 0..trials {
        let n = rng.random_range(1..=size.max(1));
        let e = random_expr(&mut rng, n);
        let canonical = rewrite_to_irreducible(&e, rules, Strategy::Canonical);
        let random = rewrite_to_irreducible(&e, rules, Strategy::Random(&mut rng));
        let (canonical, random) = match (canonical, random) {
            (Ok(c), Ok(r)) => (c, r),
            (Err(err), _) | (_, Err(err)) => {
                fail(0, err.to_string());
                continue;
            }
        };
        if canonical != random {
            fail(1, format!("{e}: canonical {canonical} vs random {random}"));
        }
        let reference = flatten(&e).to_expr();
        if canonical != reference {
            fail(
                2,
                format!("{e}: rewritten {canonical} vs structural {reference}"),
            );
        }
        match rewrite_to_irreducible(&canonical, rules, Strategy::Canonical) {
            Ok(again) if again == canonical => {}
            _ => fail(3, format!("{e}: rewriting {canonical} again changes it")),
        }
    }
    let names = [
        "coherence:termination",
        "coherence:confluence",
        "coherence:reference_agreement",
        "coherence:idempotence",
    ];
    let mut report = CheckReport::new();
    for k in 0..4 {
        let mut c = Check::from_defect(names[k], counts[k] as f64, 0.0)
            .with_note(format!("{trials} trials, seed {seed}, size <= {size}"));
        if let Some(w) = failures[k].take() {
            c = c.with_witness(w);
        }
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> TensorExpr {
        parse_expr(s).unwrap()
    }

    fn a(n: &str) -> TensorExpr {
        TensorExpr::atom(n)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("A (x) B"), TensorExpr::tensor(a("A"), a("B")));
        assert_eq!(
            p("((A (x) B) (x) I)^"),
            TensorExpr::dual(TensorExpr::tensor(
                TensorExpr::tensor(a("A"), a("B")),
                TensorExpr::Unit
            ))
        );
        let err = parse_expr("A (x)").unwrap_err();
        assert_eq!(err.pos, 5);
        assert!(err.message.contains("end of input"));
        assert!(parse_expr("A (x").is_err());
        assert_eq!(p("A(x)B(x)C"), p("(A (x) B) (x) C"));
        assert!(parse_expr(" ( x ) ").is_err());
        assert_eq!(p("A ( x ) B"), p("A (x) B"));
        assert!(parse_expr("A B").is_err());
        assert!(parse_expr("").is_err());
        assert_eq!(parse_expr("A $").unwrap_err().pos, 2);
    }

    #[test]
    fn normalize_examples() {
        let nf = normalize(&p("(A (x) B) (x) C"));
        assert_eq!(
            nf.to_expr(),
            TensorExpr::tensor(a("A"), TensorExpr::tensor(a("B"), a("C")))
        );
        assert_eq!(normalize(&p("(A (x) B)^")).to_string(), "B^ (x) A^");
        assert_eq!(normalize(&p("I (x) A^^")).to_string(), "A");
        assert_eq!(normalize(&p("I (x) (A (x) I)")).to_string(), "A");
        assert_eq!(normalize(&p("I^ (x) I")).to_string(), "I");
        assert!(normalize(&p("I^")).is_unit());
    }

    #[test]
    fn coherence_equality_examples() {
        assert!(equal_up_to_coherence(&p("(A(x)B)(x)C"), &p("A(x)(B(x)C)")));
        assert!(!equal_up_to_coherence(&p("A(x)B"), &p("B(x)A")));
        assert!(equal_up_to_coherence(&p("(I(x)A)^"), &p("A^")));
        // both orders of the two-step rewrite of (I (x) A)^
        let e = p("(I(x)A)^");
        let via_unit = Rule::DualTensor.apply(&e).unwrap();
        assert_eq!(
            via_unit,
            TensorExpr::tensor(TensorExpr::dual(a("A")), TensorExpr::dual(TensorExpr::Unit))
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "A (x) (B (x) C)",
            "(A (x) B)^^",
            "I (x) A^",
            "((A (x) I)^ (x) B)^",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s}");
        }
    }

    #[test]
    fn fuzz_passes_on_full_rules() {
        let r = coherence_fuzz(1, 10, 1000);
        assert!(r.all_pass(), "{r}");
        assert!(coherence_fuzz(7, 0, 50).all_pass());
    }

    #[test]
    fn fuzz_catches_missing_double_dual_rule() {
        let broken: Vec<Rule> = ALL_RULES
            .into_iter()
            .filter(|r| *r != Rule::DualDual)
            .collect();
        let r = coherence_fuzz_with(&broken, 1, 10, 1000);
        let c = r.get("coherence:reference_agreement").unwrap();
        assert!(c.failed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn step_cap_scales_with_size() {
        assert_eq!(step_cap(&p("A (x) B")), 90);
    }
}
