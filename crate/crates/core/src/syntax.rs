//! Terms and formulas of first-order logic with identity, an existence
//! predicate `E!` and the binary quantifier `the x [F, G]`.
//!
//! Bound variables keep their source names. Substitution renames a binder
//! only when it would capture a variable of the substituted term, picking
//! the least numeric suffix that is not already in use, so output is
//! deterministic. [`alpha_eq`] compares formulas up to bound-variable names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Ident = String;
pub type VarSet = BTreeSet<Ident>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Ident),
    Const(Ident),
    App(Ident, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<Ident>) -> Term {
        Term::Var(name.into())
    }

    pub fn cnst(name: impl Into<Ident>) -> Term {
        Term::Const(name.into())
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    /// Replaces the variable `x` by `t`. Terms have no binders.
    pub fn substitute(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(x, t)).collect())
            }
        }
    }

    fn collect_functions(&self, out: &mut BTreeMap<Ident, usize>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone(), args.len());
            args.iter().for_each(|a| a.collect_functions(out));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pred(Ident, Vec<Term>),
    Eq(Term, Term),
    Exists(Term),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    All(Ident, Box<Formula>),
    Ex(Ident, Box<Formula>),
    Iota(Ident, Box<Formula>, Box<Formula>),
}

/// Main connective of a formula, used to pair introductions with
/// eliminations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
    Bottom,
    All,
    Ex,
    Iota,
}

impl Formula {
    pub fn pred(name: impl Into<Ident>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn all(x: impl Into<Ident>, a: Formula) -> Formula {
        Formula::All(x.into(), Box::new(a))
    }

    pub fn ex(x: impl Into<Ident>, a: Formula) -> Formula {
        Formula::Ex(x.into(), Box::new(a))
    }

    pub fn iota(x: impl Into<Ident>, f: Formula, g: Formula) -> Formula {
        Formula::Iota(x.into(), Box::new(f), Box::new(g))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn exists(t: Term) -> Formula {
        Formula::Exists(t)
    }

    /// Atomic formulas: predicates, identities and `E! t`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_))
    }

    pub fn connective(&self) -> Option<Connective> {
        Some(match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => return None,
            Formula::Bottom => Connective::Bottom,
            Formula::And(..) => Connective::And,
            Formula::Or(..) => Connective::Or,
            Formula::Imp(..) => Connective::Imp,
            Formula::All(..) => Connective::All,
            Formula::Ex(..) => Connective::Ex,
            Formula::Iota(..) => Connective::Iota,
        })
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut VarSet) {
        let add_term = |t: &Term, bound: &Vec<Ident>, out: &mut VarSet| {
            for v in t.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Exists(t) => add_term(t, bound, out),
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::All(x, a) | Formula::Ex(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            Formula::Iota(x, f, g) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Pred(_, args) => args.iter().any(|t| t.contains_var(x)),
            Formula::Eq(a, b) => a.contains_var(x) || b.contains_var(x),
            Formula::Exists(t) => t.contains_var(x),
            Formula::Bottom => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.has_free(x) || b.has_free(x)
            }
            Formula::All(y, a) | Formula::Ex(y, a) => y != x && a.has_free(x),
            Formula::Iota(y, f, g) => y != x && (f.has_free(x) || g.has_free(x)),
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    pub fn collect_all_vars(&self, out: &mut VarSet) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Exists(t) => t.collect_vars(out),
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::All(x, a) | Formula::Ex(x, a) => {
                out.insert(x.clone());
                a.collect_all_vars(out);
            }
            Formula::Iota(x, f, g) => {
                out.insert(x.clone());
                f.collect_all_vars(out);
                g.collect_all_vars(out);
            }
        }
    }

    /// Predicate and function symbols with the arities they are used at.
    pub fn symbols(&self, preds: &mut BTreeMap<Ident, usize>, funs: &mut BTreeMap<Ident, usize>) {
        let terms = |ts: &[&Term], funs: &mut BTreeMap<Ident, usize>| {
            ts.iter().for_each(|t| t.collect_functions(funs))
        };
        match self {
            Formula::Pred(p, args) => {
                preds.insert(p.clone(), args.len());
                terms(&args.iter().collect::<Vec<_>>(), funs);
            }
            Formula::Eq(a, b) => terms(&[a, b], funs),
            Formula::Exists(t) => terms(&[t], funs),
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.symbols(preds, funs);
                b.symbols(preds, funs);
            }
            Formula::All(_, a) | Formula::Ex(_, a) => a.symbols(preds, funs),
            Formula::Iota(_, f, g) => {
                f.symbols(preds, funs);
                g.symbols(preds, funs);
            }
        }
    }
}

/// Declared symbols. Names are disjoint across the three groups.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeMap<Ident, usize>,
    pub functions: BTreeMap<Ident, usize>,
    pub constants: BTreeSet<Ident>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("`{name}` is already declared as a {group}")]
    Clash { name: Ident, group: &'static str },
    #[error("`{name}` used with arity {found}, declared with arity {declared}")]
    Arity { name: Ident, declared: usize, found: usize },
}

impl Signature {
    fn group_of(&self, name: &str) -> Option<&'static str> {
        if self.predicates.contains_key(name) {
            Some("predicate")
        } else if self.functions.contains_key(name) {
            Some("function")
        } else if self.constants.contains(name) {
            Some("constant")
        } else {
            None
        }
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn declare_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        match self.group_of(name) {
            None | Some("constant") => {
                self.constants.insert(name.to_string());
                Ok(())
            }
            Some(group) => Err(SignatureError::Clash { name: name.into(), group }),
        }
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        let group = self.group_of(name);
        Self::declare(&mut self.predicates, group, "predicate", name, arity)
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        let group = self.group_of(name);
        Self::declare(&mut self.functions, group, "function", name, arity)
    }

    fn declare(
        map: &mut BTreeMap<Ident, usize>,
        existing: Option<&'static str>,
        group: &'static str,
        name: &str,
        arity: usize,
    ) -> Result<(), SignatureError> {
        match existing {
            Some(g) if g != group => Err(SignatureError::Clash { name: name.into(), group: g }),
            _ => match map.get(name) {
                Some(&declared) if declared != arity => Err(SignatureError::Arity {
                    name: name.into(),
                    declared,
                    found: arity,
                }),
                _ => {
                    map.insert(name.to_string(), arity);
                    Ok(())
                }
            },
        }
    }
}

pub fn free_vars(a: &Formula) -> VarSet {
    a.free_vars()
}

/// Number of connectives. `_|_` counts one; atomic formulas count zero.
pub fn degree(a: &Formula) -> usize {
    match a {
        Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) => 0,
        Formula::Bottom => 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + degree(a) + degree(b),
        Formula::All(_, a) | Formula::Ex(_, a) => 1 + degree(a),
        Formula::Iota(_, f, g) => 1 + degree(f) + degree(g),
    }
}

/// True iff no variable of `t` would be captured when `t` replaces the free
/// occurrences of `x` in `a`.
pub fn is_free_for(t: &Term, x: &str, a: &Formula) -> bool {
    let tv = t.free_vars();
    free_for(&tv, x, a)
}

fn free_for(tv: &VarSet, x: &str, a: &Formula) -> bool {
    match a {
        Formula::Pred(..) | Formula::Eq(..) | Formula::Exists(_) | Formula::Bottom => true,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            free_for(tv, x, a) && free_for(tv, x, b)
        }
        Formula::All(y, b) | Formula::Ex(y, b) => {
            if y == x || !b.has_free(x) {
                true
            } else {
                !tv.contains(y) && free_for(tv, x, b)
            }
        }
        Formula::Iota(y, f, g) => {
            if y == x || !(f.has_free(x) || g.has_free(x)) {
                true
            } else {
                !tv.contains(y) && free_for(tv, x, f) && free_for(tv, x, g)
            }
        }
    }
}

/// `base` with trailing digits stripped, suffixed by the least `n >= 1`
/// such that the result is not in `avoid`.
pub fn fresh_var(base: &str, avoid: &VarSet) -> Ident {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded suffix search")
}

/// Capture-avoiding substitution of `t` for the free occurrences of `x`.
pub fn substitute(a: &Formula, x: &str, t: &Term) -> Formula {
    if !a.has_free(x) {
        return a.clone();
    }
    let tv = t.free_vars();
    subst(a, x, t, &tv)
}

fn subst(a: &Formula, x: &str, t: &Term, tv: &VarSet) -> Formula {
    match a {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|s| s.substitute(x, t)).collect())
        }
        Formula::Eq(l, r) => Formula::Eq(l.substitute(x, t), r.substitute(x, t)),
        Formula::Exists(s) => Formula::Exists(s.substitute(x, t)),
        Formula::Bottom => Formula::Bottom,
        Formula::And(l, r) => Formula::and(subst(l, x, t, tv), subst(r, x, t, tv)),
        Formula::Or(l, r) => Formula::or(subst(l, x, t, tv), subst(r, x, t, tv)),
        Formula::Imp(l, r) => Formula::imp(subst(l, x, t, tv), subst(r, x, t, tv)),
        Formula::All(y, b) | Formula::Ex(y, b) => {
            let rebuild = |y: Ident, b: Formula| match a {
                Formula::All(..) => Formula::all(y, b),
                _ => Formula::ex(y, b),
            };
            if y == x || !b.has_free(x) {
                return a.clone();
            }
            if tv.contains(y) {
                let mut avoid = b.all_vars();
                avoid.extend(tv.iter().cloned());
                avoid.insert(x.to_string());
                let y2 = fresh_var(y, &avoid);
                let b2 = subst(b, y, &Term::Var(y2.clone()), &VarSet::from([y2.clone()]));
                rebuild(y2, subst(&b2, x, t, tv))
            } else {
                rebuild(y.clone(), subst(b, x, t, tv))
            }
        }
        Formula::Iota(y, f, g) => {
            if y == x || !(f.has_free(x) || g.has_free(x)) {
                return a.clone();
            }
            if tv.contains(y) {
                let mut avoid = f.all_vars();
                g.collect_all_vars(&mut avoid);
                avoid.extend(tv.iter().cloned());
                avoid.insert(x.to_string());
                let y2 = fresh_var(y, &avoid);
                let yv = Term::Var(y2.clone());
                let ys = VarSet::from([y2.clone()]);
                let f2 = subst(f, y, &yv, &ys);
                let g2 = subst(g, y, &yv, &ys);
                Formula::iota(y2, subst(&f2, x, t, tv), subst(&g2, x, t, tv))
            } else {
                Formula::iota(y.clone(), subst(f, x, t, tv), subst(g, x, t, tv))
            }
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha(a, b, &mut Vec::new(), &mut Vec::new())
}

fn term_alpha(s: &Term, t: &Term, ea: &[Ident], eb: &[Ident]) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = ea.iter().rposition(|v| v == x);
            let iy = eb.iter().rposition(|v| v == y);
            match (ix, iy) {
                (None, None) => x == y,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, ea, eb))
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, ea: &mut Vec<Ident>, eb: &mut Vec<Ident>) -> bool {
    match (a, b) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, ea, eb))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
            term_alpha(a1, b1, ea, eb) && term_alpha(a2, b2, ea, eb)
        }
        (Formula::Exists(s), Formula::Exists(t)) => term_alpha(s, t, ea, eb),
        (Formula::Bottom, Formula::Bottom) => true,
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => {
            alpha(a1, b1, ea, eb) && alpha(a2, b2, ea, eb)
        }
        (Formula::All(x, a1), Formula::All(y, b1)) | (Formula::Ex(x, a1), Formula::Ex(y, b1)) => {
            ea.push(x.clone());
            eb.push(y.clone());
            let r = alpha(a1, b1, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        (Formula::Iota(x, f1, g1), Formula::Iota(y, f2, g2)) => {
            ea.push(x.clone());
            eb.push(y.clone());
            let r = alpha(f1, f2, ea, eb) && alpha(g1, g2, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        _ => false,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => f.write_str(x),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

// Precedence levels used by the printer: 0 implication, 1 disjunction,
// 2 conjunction, 3 atoms and self-delimiting forms.
fn level(a: &Formula) -> u8 {
    match a {
        Formula::Imp(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::All(..) | Formula::Ex(..) => 0,
        _ => 3,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, a: &Formula, min: u8) -> fmt::Result {
    let quant = matches!(a, Formula::All(..) | Formula::Ex(..));
    if quant || level(a) < min {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred(p, args) if args.is_empty() => f.write_str(p),
            Formula::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Exists(t) => write!(f, "E! {t}"),
            Formula::Bottom => f.write_str("_|_"),
            // & and | associate to the left, -> to the right.
            Formula::And(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(" & ")?;
                write_operand(f, b, 3)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" | ")?;
                write_operand(f, b, 2)
            }
            Formula::Imp(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" -> ")?;
                if matches!(**b, Formula::All(..) | Formula::Ex(..)) {
                    write!(f, "{b}")
                } else {
                    write_operand(f, b, 0)
                }
            }
            Formula::All(x, a) => write!(f, "all {x}. {a}"),
            Formula::Ex(x, a) => write!(f, "ex {x}. {a}"),
            Formula::Iota(x, a, b) => write!(f, "the {x} [{a}, {b}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn p(name: &str, args: &[Term]) -> Formula {
        Formula::pred(name, args.to_vec())
    }

    #[test]
    fn free_vars_examples() {
        assert!(free_vars(&Formula::all("x", p("F", &[v("x")]))).is_empty());
        let iota = Formula::iota("x", p("F", &[v("x"), v("y")]), p("G", &[v("x")]));
        assert_eq!(free_vars(&iota), VarSet::from(["y".to_string()]));
        let t = Term::App("f".into(), vec![v("x"), Term::cnst("c")]);
        assert_eq!(t.free_vars(), VarSet::from(["x".to_string()]));
    }

    #[test]
    fn free_for_examples() {
        let a = Formula::ex("y", p("R", &[v("x"), v("y")]));
        assert!(!is_free_for(&v("y"), "x", &a));
        assert!(is_free_for(&Term::cnst("c"), "x", &a));
        // the y [F(x), G]: the only binder is y and x occurs free under it.
        let b = Formula::iota("y", p("F", &[v("x")]), p("G", &[]));
        assert!(!is_free_for(&v("y"), "x", &b));
        assert!(is_free_for(&v("z"), "x", &b));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&p("F", &[v("x")]), "x", &v("t")), p("F", &[v("t")]));
        let bound = Formula::all("x", p("F", &[v("x")]));
        assert_eq!(substitute(&bound, "x", &v("t")), bound);
        let a = Formula::ex("y", p("R", &[v("x"), v("y")]));
        assert_eq!(
            substitute(&a, "x", &v("y")),
            Formula::ex("y1", p("R", &[v("y"), v("y1")]))
        );
    }

    #[test]
    fn fresh_suffix_skips_used_names() {
        let avoid = VarSet::from(["y1".to_string(), "y2".to_string()]);
        assert_eq!(fresh_var("y", &avoid), "y3");
        assert_eq!(fresh_var("y2", &avoid), "y3");
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&Formula::Bottom), 1);
        assert_eq!(degree(&Formula::exists(v("t"))), 0);
        let iota = Formula::iota("x", p("F", &[v("x")]), p("G", &[v("x")]));
        assert_eq!(degree(&iota), 1);
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(
            &Formula::all("x", p("F", &[v("x")])),
            &Formula::all("y", p("F", &[v("y")]))
        ));
        assert!(alpha_eq(
            &Formula::iota("x", p("F", &[v("x")]), p("G", &[v("x")])),
            &Formula::iota("y", p("F", &[v("y")]), p("G", &[v("y")]))
        ));
        assert!(!alpha_eq(&p("F", &[v("x")]), &p("F", &[v("y")])));
        // a bound name must not match a free one
        assert!(!alpha_eq(
            &Formula::all("x", p("R", &[v("x"), v("y")])),
            &Formula::all("y", p("R", &[v("y"), v("y")]))
        ));
    }

    #[test]
    fn printer_parenthesizes() {
        let a = Formula::imp(
            Formula::imp(p("A", &[]), p("B", &[])),
            Formula::or(p("C", &[]), Formula::and(p("D", &[]), p("E", &[]))),
        );
        assert_eq!(a.to_string(), "(A -> B) -> C | D & E");
        let b = Formula::and(Formula::all("x", p("F", &[v("x")])), p("G", &[]));
        assert_eq!(b.to_string(), "(all x. F(x)) & G");
    }
}
