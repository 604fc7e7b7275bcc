//! Formulas of the implicational fragment and lambda terms, with their text
//! encodings, size measures, polarity analysis and linearity checks.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// An implicational formula: atoms joined by the linear implication `-o`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(u32),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn imp(left: Formula, right: Formula) -> Formula {
        Formula::Imp(Box::new(left), Box::new(right))
    }

    /// Number of `-o` nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.size() + 1
    }

    /// Atoms in left-to-right leaf order.
    pub fn leaves(&self) -> Vec<u32> {
        fn walk(f: &Formula, out: &mut Vec<u32>) {
            match f {
                Formula::Atom(a) => out.push(*a),
                Formula::Imp(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        walk(self, &mut out);
        out
    }

    /// Rename atoms to `0, 1, 2, ...` in order of first occurrence.
    pub fn relabel_canonical(&self) -> Formula {
        fn walk(f: &Formula, seen: &mut Vec<u32>) -> Formula {
            match f {
                Formula::Atom(a) => {
                    let id = match seen.iter().position(|s| s == a) {
                        Some(i) => i,
                        None => {
                            seen.push(*a);
                            seen.len() - 1
                        }
                    };
                    Formula::Atom(id as u32)
                }
                Formula::Imp(l, r) => {
                    let l = walk(l, seen);
                    Formula::imp(l, walk(r, seen))
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    pub fn is_canonically_labeled(&self) -> bool {
        let mut next = 0;
        for a in self.leaves() {
            if a > next {
                return false;
            }
            if a == next {
                next += 1;
            }
        }
        true
    }

    /// The atom reached by repeatedly descending into the right operand.
    pub fn head(&self) -> u32 {
        let mut f = self;
        loop {
            match f {
                Formula::Atom(a) => return *a,
                Formula::Imp(_, r) => f = r,
            }
        }
    }

    /// Occurrence counts of each atom by polarity. The root is positive and
    /// the left operand of an implication flips polarity.
    pub fn polarity_profile(&self) -> BTreeMap<u32, PolarityCount> {
        fn walk(f: &Formula, p: Polarity, out: &mut BTreeMap<u32, PolarityCount>) {
            match f {
                Formula::Atom(a) => out.entry(*a).or_default().bump(p),
                Formula::Imp(l, r) => {
                    walk(l, p.flip(), out);
                    walk(r, p, out);
                }
            }
        }
        let mut out = BTreeMap::new();
        walk(self, Polarity::Positive, &mut out);
        out
    }

    /// Every atom occurs exactly once positively and once negatively.
    pub fn is_balanced(&self) -> bool {
        self.polarity_profile()
            .values()
            .all(|c| c.positive == 1 && c.negative == 1)
    }

    /// Every atom occurs as often positively as negatively. Necessary for
    /// the formula to be the type of any closed linear term.
    pub fn is_polarity_even(&self) -> bool {
        self.polarity_profile()
            .values()
            .all(|c| c.positive == c.negative)
    }

    pub fn parse(s: &str) -> Result<Formula, ParseError> {
        FormulaParser { src: s.as_bytes(), pos: 0 }.parse_all()
    }

    pub fn to_tree_latex(&self) -> String {
        fn walk(f: &Formula, out: &mut String) {
            match f {
                Formula::Atom(a) => out.push_str(&format!("[.{a} ]")),
                Formula::Imp(l, r) => {
                    out.push_str("[.-o ");
                    walk(l, out);
                    out.push(' ');
                    walk(r, out);
                    out.push_str("  ]");
                }
            }
        }
        let mut out = String::from("\\Tree ");
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Imp(l, r) => {
                if matches!(**l, Formula::Imp(..)) {
                    write!(f, "({l}) -o {r}")
                } else {
                    write!(f, "{l} -o {r}")
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PolarityCount {
    pub positive: usize,
    pub negative: usize,
}

impl PolarityCount {
    fn bump(&mut self, p: Polarity) {
        match p {
            Polarity::Positive => self.positive += 1,
            Polarity::Negative => self.negative += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

struct FormulaParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl FormulaParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Formula, ParseError> {
        let f = self.formula()?;
        match self.peek() {
            None => Ok(f),
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("unexpected '{}' after formula", c as char),
            )),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.operand()?;
        if self.peek() == Some(b'-') {
            if self.src.get(self.pos + 1) != Some(&b'o') {
                return Err(ParseError::new(self.pos, "expected '-o'"));
            }
            self.pos += 2;
            let right = self.formula()?;
            Ok(Formula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn operand(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                text.parse()
                    .map(Formula::Atom)
                    .map_err(|_| ParseError::new(start, "atom id out of range"))
            }
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("expected atom or '(', found '{}'", c as char),
            )),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }
}

/// Identity of a lambda binder within one term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinderId(pub u32);

impl fmt::Display for BinderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A lambda term with named binders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(BinderId),
    Lam(BinderId, Box<Term>),
    App(Box<Term>, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("open term: variable {0} has no enclosing binder")]
pub struct OpenTermError(pub BinderId);

impl Term {
    pub fn var(b: u32) -> Term {
        Term::Var(BinderId(b))
    }

    pub fn lam(b: u32, body: Term) -> Term {
        Term::Lam(BinderId(b), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Number of lambda nodes plus application nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn lambda_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(_, b) => 1 + b.lambda_count(),
            Term::App(f, a) => f.lambda_count() + a.lambda_count(),
        }
    }

    pub fn app_count(&self) -> usize {
        self.size() - self.lambda_count()
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) => b.leaf_count(),
            Term::App(f, a) => f.leaf_count() + a.leaf_count(),
        }
    }

    /// Reference count of every binder, innermost binder wins on shadowing.
    fn binder_uses(&self) -> Result<Vec<usize>, OpenTermError> {
        fn walk(
            t: &Term,
            scope: &mut Vec<(BinderId, usize)>,
            uses: &mut Vec<usize>,
        ) -> Result<(), OpenTermError> {
            match t {
                Term::Var(b) => match scope.iter().rposition(|(s, _)| s == b) {
                    Some(i) => {
                        uses[scope[i].1] += 1;
                        Ok(())
                    }
                    None => Err(OpenTermError(*b)),
                },
                Term::Lam(b, body) => {
                    scope.push((*b, uses.len()));
                    uses.push(0);
                    walk(body, scope, uses)?;
                    scope.pop();
                    Ok(())
                }
                Term::App(f, a) => {
                    walk(f, scope, uses)?;
                    walk(a, scope, uses)
                }
            }
        }
        let mut uses = Vec::new();
        walk(self, &mut Vec::new(), &mut uses)?;
        Ok(uses)
    }

    pub fn is_closed(&self) -> bool {
        self.binder_uses().is_ok()
    }

    /// Every binder is referenced exactly once.
    pub fn is_linear(&self) -> Result<bool, OpenTermError> {
        Ok(self.binder_uses()?.iter().all(|&u| u == 1))
    }

    /// Every binder is referenced at most once.
    pub fn is_affine(&self) -> Result<bool, OpenTermError> {
        Ok(self.binder_uses()?.iter().all(|&u| u <= 1))
    }

    /// No application has a lambda in function position.
    pub fn is_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.is_normal(),
            Term::App(f, a) => !matches!(**f, Term::Lam(..)) && f.is_normal() && a.is_normal(),
        }
    }

    /// Renumber binders `0, 1, 2, ...` in preorder. Two closed terms are
    /// alpha-equivalent iff their canonical forms are equal.
    pub fn canonical(&self) -> Term {
        fn walk(t: &Term, scope: &mut Vec<(BinderId, u32)>, next: &mut u32) -> Term {
            match t {
                Term::Var(b) => match scope.iter().rev().find(|(s, _)| s == b) {
                    Some(&(_, id)) => Term::var(id),
                    None => Term::Var(*b),
                },
                Term::Lam(b, body) => {
                    let id = *next;
                    *next += 1;
                    scope.push((*b, id));
                    let body = walk(body, scope, next);
                    scope.pop();
                    Term::lam(id, body)
                }
                Term::App(f, a) => {
                    let f = walk(f, scope, next);
                    Term::app(f, walk(a, scope, next))
                }
            }
        }
        walk(self, &mut Vec::new(), &mut 0)
    }

    /// The shape of the term with binders and variables erased.
    pub fn skeleton(&self) -> Skeleton {
        match self {
            Term::Var(_) => Skeleton::Leaf,
            Term::Lam(_, b) => Skeleton::Lam(Box::new(b.skeleton())),
            Term::App(f, a) => Skeleton::App(Box::new(f.skeleton()), Box::new(a.skeleton())),
        }
    }

    pub fn parse(s: &str) -> Result<Term, ParseError> {
        let mut p = TermParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(ParseError::new(p.pos, "trailing input after term"));
        }
        Ok(t)
    }

    /// Postfix encoding with de Bruijn indices: a variable emits its index,
    /// an application emits its function, its argument, then `@`, and a
    /// lambda emits its body then `^`.
    pub fn to_postfix(&self) -> Result<Vec<PostfixToken>, OpenTermError> {
        fn walk(
            t: &Term,
            scope: &mut Vec<BinderId>,
            out: &mut Vec<PostfixToken>,
        ) -> Result<(), OpenTermError> {
            match t {
                Term::Var(b) => {
                    let i = scope.iter().rposition(|s| s == b).ok_or(OpenTermError(*b))?;
                    out.push(PostfixToken::Index((scope.len() - 1 - i) as u32));
                }
                Term::Lam(b, body) => {
                    scope.push(*b);
                    walk(body, scope, out)?;
                    scope.pop();
                    out.push(PostfixToken::Lam);
                }
                Term::App(f, a) => {
                    walk(f, scope, out)?;
                    walk(a, scope, out)?;
                    out.push(PostfixToken::App);
                }
            }
            Ok(())
        }
        let mut out = Vec::with_capacity(2 * self.size() + 1);
        walk(self, &mut Vec::new(), &mut out)?;
        Ok(out)
    }

    pub fn to_postfix_string(&self) -> Result<String, OpenTermError> {
        Ok(postfix_to_string(&self.to_postfix()?))
    }

    /// Rebuild a closed term from postfix tokens. Binders are numbered in
    /// preorder, so the result is already canonical.
    pub fn from_postfix(tokens: &[PostfixToken]) -> Result<Term, PostfixError> {
        // de Bruijn tree first, named afterwards once nesting depth is known
        enum Db {
            Idx(u32),
            Lam(Box<Db>),
            App(Box<Db>, Box<Db>),
        }
        let mut stack: Vec<Db> = Vec::new();
        for (pos, tok) in tokens.iter().enumerate() {
            match *tok {
                PostfixToken::Index(i) => stack.push(Db::Idx(i)),
                PostfixToken::Lam => {
                    let body = stack.pop().ok_or(PostfixError::Underflow { pos })?;
                    stack.push(Db::Lam(Box::new(body)));
                }
                PostfixToken::App => {
                    let arg = stack.pop().ok_or(PostfixError::Underflow { pos })?;
                    let fun = stack.pop().ok_or(PostfixError::Underflow { pos })?;
                    stack.push(Db::App(Box::new(fun), Box::new(arg)));
                }
            }
        }
        if stack.len() != 1 {
            return Err(PostfixError::NotOneTree { trees: stack.len() });
        }
        fn name(d: &Db, scope: &mut Vec<u32>, next: &mut u32) -> Result<Term, PostfixError> {
            Ok(match d {
                Db::Idx(i) => {
                    let i = *i as usize;
                    if i >= scope.len() {
                        return Err(PostfixError::Unbound { index: i as u32 });
                    }
                    Term::var(scope[scope.len() - 1 - i])
                }
                Db::Lam(b) => {
                    let id = *next;
                    *next += 1;
                    scope.push(id);
                    let body = name(b, scope, next)?;
                    scope.pop();
                    Term::lam(id, body)
                }
                Db::App(f, a) => {
                    let f = name(f, scope, next)?;
                    Term::app(f, name(a, scope, next)?)
                }
            })
        }
        name(&stack[0], &mut Vec::new(), &mut 0)
    }

    pub fn from_postfix_str(s: &str) -> Result<Term, PostfixError> {
        let tokens = s
            .split_whitespace()
            .map(|w| match w {
                "@" => Ok(PostfixToken::App),
                "^" => Ok(PostfixToken::Lam),
                _ => w
                    .parse()
                    .map(PostfixToken::Index)
                    .map_err(|_| PostfixError::BadToken(w.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Term::from_postfix(&tokens)
    }

    /// Readable lambda notation, e.g. `\x0.\x1.(x1 x0)`.
    pub fn to_lambda_notation(&self) -> String {
        match self {
            Term::Var(b) => b.to_string(),
            Term::Lam(b, body) => format!("\\{b}.{}", body.to_lambda_notation()),
            Term::App(f, a) => format!("({} {})", f.to_lambda_notation(), a.to_lambda_notation()),
        }
    }

    pub fn to_tree_latex(&self) -> String {
        fn walk(t: &Term, out: &mut String) {
            match t {
                Term::Var(b) => out.push_str(&format!("[.{b} ]")),
                Term::Lam(b, body) => {
                    out.push_str(&format!("[.l [.{b} ] "));
                    walk(body, out);
                    out.push_str("  ]");
                }
                Term::App(f, a) => {
                    out.push_str("[.a ");
                    walk(f, out);
                    out.push(' ');
                    walk(a, out);
                    out.push_str("  ]");
                }
            }
        }
        let mut out = String::from("\\Tree ");
        walk(self, &mut out);
        out
    }
}

/// `l(x<k>,<body>)`, `a(<fun>,<arg>)`, `x<k>`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(b) => write!(f, "{b}"),
            Term::Lam(b, body) => write!(f, "l({b},{body})"),
            Term::App(fun, arg) => write!(f, "a({fun},{arg})"),
        }
    }
}

struct TermParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn binder(&mut self) -> Result<BinderId, ParseError> {
        self.expect(b'x')?;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map(BinderId)
            .map_err(|_| ParseError::new(start, "expected binder number"))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'x') => Ok(Term::Var(self.binder()?)),
            Some(b'l') => {
                self.pos += 1;
                self.expect(b'(')?;
                let b = self.binder()?;
                self.expect(b',')?;
                let body = self.term()?;
                self.expect(b')')?;
                Ok(Term::Lam(b, Box::new(body)))
            }
            Some(b'a') => {
                self.pos += 1;
                self.expect(b'(')?;
                let f = self.term()?;
                self.expect(b',')?;
                let a = self.term()?;
                self.expect(b')')?;
                Ok(Term::app(f, a))
            }
            Some(c) => Err(ParseError::new(
                self.pos,
                format!("expected 'l', 'a' or 'x', found '{}'", *c as char),
            )),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PostfixToken {
    /// de Bruijn index, 0 is the innermost binder
    Index(u32),
    App,
    Lam,
}

impl fmt::Display for PostfixToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostfixToken::Index(i) => write!(f, "{i}"),
            PostfixToken::App => f.write_str("@"),
            PostfixToken::Lam => f.write_str("^"),
        }
    }
}

pub fn postfix_to_string(tokens: &[PostfixToken]) -> String {
    let mut s = String::with_capacity(tokens.len() * 2);
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&t.to_string());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PostfixError {
    #[error("token {pos} needs more operands than are on the stack")]
    Underflow { pos: usize },
    #[error("token stream encodes {trees} trees, expected exactly one")]
    NotOneTree { trees: usize },
    #[error("de Bruijn index {index} is not bound")]
    Unbound { index: u32 },
    #[error("unrecognized token '{0}'")]
    BadToken(String),
}

/// A lambda-term shape: unary lambda nodes, binary application nodes and
/// unlabeled leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Skeleton {
    Leaf,
    Lam(Box<Skeleton>),
    App(Box<Skeleton>, Box<Skeleton>),
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Leaf => f.write_str("leaf"),
            Skeleton::Lam(b) => write!(f, "l({b})"),
            Skeleton::App(a, b) => write!(f, "a({a},{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn swap() -> Term {
        // \x.\y.(y x)
        Term::lam(0, Term::lam(1, Term::app(Term::var(1), Term::var(0))))
    }

    #[test]
    fn formula_sizes() {
        assert_eq!(Formula::Atom(0).size(), 0);
        assert_eq!(f("0 -o (0 -o 1) -o 1").size(), 3);
        assert_eq!(f("0 -o ((1 -o 2) -o 3) -o 0").size(), 4);
    }

    #[test]
    fn term_sizes() {
        assert_eq!(Term::lam(0, Term::var(0)).size(), 1);
        assert_eq!(swap().size(), 3);
        let id = |b| Term::lam(b, Term::var(b));
        let t = Term::lam(
            0,
            Term::app(
                Term::app(Term::app(Term::var(0), id(1)), id(2)),
                id(3),
            ),
        );
        assert_eq!(t.size(), 7);
    }

    #[test]
    fn linearity() {
        let k = Term::lam(0, Term::lam(1, Term::var(0)));
        let dup = Term::lam(0, Term::app(Term::var(0), Term::var(0)));
        assert_eq!(swap().is_linear(), Ok(true));
        assert_eq!(k.is_linear(), Ok(false));
        assert_eq!(dup.is_linear(), Ok(false));
        assert_eq!(k.is_affine(), Ok(true));
        assert_eq!(swap().is_affine(), Ok(true));
        assert_eq!(dup.is_affine(), Ok(false));
    }

    #[test]
    fn open_terms_are_errors() {
        let open = Term::lam(0, Term::var(1));
        assert_eq!(open.is_linear(), Err(OpenTermError(BinderId(1))));
        assert_eq!(open.is_affine(), Err(OpenTermError(BinderId(1))));
        assert!(open.to_postfix().is_err());
    }

    #[test]
    fn polarity() {
        let p = |s: &str| {
            f(s).polarity_profile()
                .into_iter()
                .map(|(a, c)| (a, (c.positive, c.negative)))
                .collect::<Vec<_>>()
        };
        assert_eq!(p("0 -o 0"), vec![(0, (1, 1))]);
        assert_eq!(p("0 -o (0 -o 1) -o 1"), vec![(0, (1, 1)), (1, (1, 1))]);
        assert_eq!(p("0 -o 1 -o 0"), vec![(0, (1, 1)), (1, (0, 1))]);
        assert_eq!(Polarity::Positive.flip().flip(), Polarity::Positive);
    }

    #[test]
    fn balance() {
        assert!(f("0 -o (0 -o 1) -o 1").is_balanced());
        assert!(!f("0 -o 1 -o 0").is_balanced());
        assert!(!f("0 -o 0 -o 0").is_balanced());
        assert!(!f("0").is_balanced());
    }

    #[test]
    fn parse_and_print_formulas() {
        assert_eq!(
            f("0 -o 1 -o 0"),
            Formula::imp(Formula::Atom(0), Formula::imp(Formula::Atom(1), Formula::Atom(0)))
        );
        assert_eq!(
            f("(0 -o 1) -o 2"),
            Formula::imp(Formula::imp(Formula::Atom(0), Formula::Atom(1)), Formula::Atom(2))
        );
        assert_eq!(Formula::Atom(7).to_string(), "7");
        assert_eq!(f(" ( (0-o1) -o 2 ) ").to_string(), "(0 -o 1) -o 2");
        assert_eq!(f("0 -o (1 -o 0)").to_string(), "0 -o 1 -o 0");
    }

    #[test]
    fn formula_parse_errors() {
        for bad in ["", "0 -o", "(0 -o 1", "0 1", "0 - 1", "a", "0 -o )"] {
            assert!(Formula::parse(bad).is_err(), "{bad:?} should not parse");
        }
        assert_eq!(Formula::parse("0 -o x").unwrap_err().pos, 5);
    }

    #[test]
    fn head_and_canonical_labels() {
        assert_eq!(f("0").head(), 0);
        assert_eq!(f("(0 -o 0) -o 1").head(), 1);
        assert_eq!(f("0 -o 1 -o 2").head(), 2);
        assert!(f("0 -o (0 -o 1) -o 1").is_canonically_labeled());
        assert!(!f("1 -o 0").is_canonically_labeled());
        assert_eq!(f("5 -o (5 -o 2) -o 2").relabel_canonical(), f("0 -o (0 -o 1) -o 1"));
    }

    #[test]
    fn term_text() {
        assert_eq!(swap().to_string(), "l(x0,l(x1,a(x1,x0)))");
        assert_eq!(Term::parse("l(x0,l(x1,a(x1,x0)))").unwrap(), swap());
        assert_eq!(Term::parse(" l( x3 , x3 ) ").unwrap(), Term::lam(3, Term::var(3)));
        assert!(Term::parse("l(x0,x0").is_err());
        assert!(Term::parse("q").is_err());
    }

    #[test]
    fn postfix() {
        assert_eq!(swap().to_postfix_string().unwrap(), "0 1 @ ^ ^");
        assert_eq!(Term::lam(0, Term::var(0)).to_postfix_string().unwrap(), "0 ^");
        assert_eq!(Term::from_postfix_str("0 1 @ ^ ^").unwrap(), swap());
        assert_eq!(
            Term::from_postfix_str("0 @"),
            Err(PostfixError::Underflow { pos: 1 })
        );
        assert_eq!(
            Term::from_postfix_str("0 ^ 0 ^"),
            Err(PostfixError::NotOneTree { trees: 2 })
        );
        assert_eq!(
            Term::from_postfix_str("1 ^"),
            Err(PostfixError::Unbound { index: 1 })
        );
        assert!(matches!(Term::from_postfix_str("0 ^ x"), Err(PostfixError::BadToken(_))));
    }

    #[test]
    fn canonical_binders_and_normality() {
        let t = Term::lam(7, Term::lam(3, Term::app(Term::var(3), Term::var(7))));
        assert_eq!(t.canonical(), swap());
        let redex = Term::lam(0, Term::app(Term::lam(1, Term::var(1)), Term::var(0)));
        assert!(!redex.is_normal());
        assert!(swap().is_normal());
    }

    #[test]
    fn latex_trees() {
        assert_eq!(
            f("0 -o (0 -o 1) -o 1").to_tree_latex(),
            "\\Tree [.-o [.0 ] [.-o [.-o [.0 ] [.1 ]  ] [.1 ]  ]  ]"
        );
        assert_eq!(
            swap().to_tree_latex(),
            "\\Tree [.l [.x0 ] [.l [.x1 ] [.a [.x1 ] [.x0 ]  ]  ]  ]"
        );
    }
}
