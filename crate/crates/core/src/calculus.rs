//! Rule checking for the three systems: `i` (intuitionist logic with the
//! binary description quantifier), `inf` (its negative free counterpart)
//! and `inf-prime` (`inf` with IotaE2 replaced by IotaE2A).

use std::fmt;

use crate::proof::{open_assumptions_detailed, path_string, Aux, Deduction, NodePath, Rule, RuleApp};
use crate::syntax::{alpha_eq, fresh_var, substitute, Formula, Ident, Term, VarSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    I,
    Inf,
    InfPrime,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::I, Mode::Inf, Mode::InfPrime];

    pub fn name(self) -> &'static str {
        match self {
            Mode::I => "i",
            Mode::Inf => "inf",
            Mode::InfPrime => "inf-prime",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        match name {
            "i" => Some(Mode::I),
            "inf" => Some(Mode::Inf),
            "inf-prime" | "inf_prime" => Some(Mode::InfPrime),
            _ => None,
        }
    }

    /// Existence premises and discharges are present.
    pub fn is_free(self) -> bool {
        self != Mode::I
    }

    pub fn has_rule(self, rule: Rule) -> bool {
        match rule {
            Rule::EqI => self == Mode::I,
            Rule::EqIn | Rule::AD | Rule::FD => self.is_free(),
            Rule::IotaE2 => self != Mode::InfPrime,
            Rule::IotaE2A => self == Mode::InfPrime,
            _ => true,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    WrongPremiseShape,
    EigenviolationInAssumptions,
    EigenviolationInConclusion,
    NotAtomic,
    NotFreeFor,
    LabelMisuse,
    RuleUnavailableInMode,
    ConclusionMismatch,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub path: NodePath,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}: {}", path_string(&self.path), self.kind, self.message)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Accept BottomE_gen and EqE_gen, which the elaborator expands.
    pub allow_derived: bool,
}

type Fail = (ErrorKind, String);

fn fail<T>(kind: ErrorKind, message: impl Into<String>) -> Result<T, Fail> {
    Err((kind, message.into()))
}

/// What a correctly formed node discharges and which variable it binds.
#[derive(Default)]
struct Shape {
    discharges: Vec<(usize, Vec<Formula>)>,
    eigen: Option<(Ident, usize)>,
}

pub fn check(d: &Deduction, mode: Mode) -> Vec<CheckError> {
    check_with(d, mode, CheckOptions::default())
}

pub fn check_with(d: &Deduction, mode: Mode, opts: CheckOptions) -> Vec<CheckError> {
    let mut errs = Vec::new();
    visit(d, mode, opts, &mut Vec::new(), &mut errs);
    for a in open_assumptions_detailed(d) {
        if let Some(l) = a.label {
            errs.push(CheckError {
                path: a.path,
                kind: ErrorKind::LabelMisuse,
                message: format!("label {l} is not discharged by any rule below `{}`", a.formula),
            });
        }
    }
    errs
}

pub fn is_valid(d: &Deduction, mode: Mode) -> bool {
    check(d, mode).is_empty()
}

fn visit(d: &Deduction, mode: Mode, opts: CheckOptions, path: &mut NodePath, errs: &mut Vec<CheckError>) {
    let Deduction::Inference { rule, premises, conclusion } = d else {
        return;
    };
    for (i, p) in premises.iter().enumerate() {
        path.push(i);
        visit(p, mode, opts, path, errs);
        path.pop();
    }
    let err = |kind, message: String| CheckError { path: path.clone(), kind, message };
    if !mode.has_rule(rule.rule) || (rule.rule.is_derived() && !opts.allow_derived) {
        errs.push(err(
            ErrorKind::RuleUnavailableInMode,
            format!("{} is not a rule of {}", rule.rule, mode),
        ));
        return;
    }
    let shape = match rule_shape(rule, premises, conclusion, mode) {
        Ok(s) => s,
        Err((kind, message)) => {
            errs.push(err(kind, format!("{}: {message}", rule.rule)));
            return;
        }
    };
    let Some(label) = rule.label else {
        if let Some((y, pi)) = &shape.eigen {
            eigen_in_assumptions(path, rule, premises, *pi, y, None, errs);
        }
        return;
    };
    if shape.discharges.is_empty() {
        errs.push(err(ErrorKind::LabelMisuse, format!("{} discharges nothing in {mode} but has label {label}", rule.rule)));
        return;
    }
    for (pi, allowed) in &shape.discharges {
        for a in open_assumptions_detailed(&premises[*pi]) {
            if a.label == Some(label) && !allowed.iter().any(|f| alpha_eq(f, &a.formula)) {
                let mut at = path.clone();
                at.push(*pi);
                at.extend(a.path);
                let expected: Vec<String> = allowed.iter().map(|f| format!("`{f}`")).collect();
                errs.push(CheckError {
                    path: at,
                    kind: ErrorKind::LabelMisuse,
                    message: format!(
                        "{} with label {label} may discharge {} here, not `{}`",
                        rule.rule,
                        expected.join(" or "),
                        a.formula
                    ),
                });
            }
        }
        premises[*pi].walk(&mut |p, n| {
            if let Some(inner) = n.rule() {
                if inner.label == Some(label) {
                    let mut at = path.clone();
                    at.push(*pi);
                    at.extend(p.iter().copied());
                    errs.push(CheckError {
                        path: at,
                        kind: ErrorKind::LabelMisuse,
                        message: format!("label {label} is already used by the enclosing {}", rule.rule),
                    });
                }
            }
        });
    }
    if let Some((y, pi)) = &shape.eigen {
        eigen_in_assumptions(path, rule, premises, *pi, y, Some(label), errs);
    }
}

fn eigen_in_assumptions(
    path: &NodePath,
    rule: &RuleApp,
    premises: &[Deduction],
    pi: usize,
    y: &str,
    label: Option<u32>,
    errs: &mut Vec<CheckError>,
) {
    for a in open_assumptions_detailed(&premises[pi]) {
        if label.is_some() && a.label == label {
            continue;
        }
        if a.formula.has_free(y) {
            let mut at = path.clone();
            at.push(pi);
            at.extend(a.path);
            errs.push(CheckError {
                path: path.clone(),
                kind: ErrorKind::EigenviolationInAssumptions,
                message: format!(
                    "{}: eigenvariable `{y}` is free in the open assumption `{}` at {}",
                    rule.rule,
                    a.formula,
                    path_string(&at)
                ),
            });
        }
    }
}

fn count(premises: &[Deduction], n: usize) -> Result<(), Fail> {
    if premises.len() == n {
        Ok(())
    } else {
        fail(ErrorKind::WrongPremiseShape, format!("expected {n} premises, found {}", premises.len()))
    }
}

fn same(a: &Formula, b: &Formula) -> bool {
    alpha_eq(a, b)
}

fn expect_premise(premises: &[Deduction], i: usize, want: &Formula) -> Result<(), Fail> {
    let got = premises[i].conclusion();
    if same(got, want) {
        Ok(())
    } else {
        fail(ErrorKind::WrongPremiseShape, format!("premise {} should be `{want}`, found `{got}`", i + 1))
    }
}

fn expect_conclusion(got: &Formula, want: &Formula) -> Result<(), Fail> {
    if same(got, want) {
        Ok(())
    } else {
        fail(ErrorKind::ConclusionMismatch, format!("conclusion should be `{want}`, found `{got}`"))
    }
}

fn expect_exists(premises: &[Deduction], i: usize, t: &Term) -> Result<(), Fail> {
    expect_premise(premises, i, &Formula::exists(t.clone()))
}

fn no_options(app: &RuleApp, eigen: bool, witness: bool, aux: bool) -> Result<(), Fail> {
    let unused = [
        (app.eigen.is_some() && !eigen, ":eigen"),
        (app.witness.is_some() && !witness, ":witness"),
        (app.aux.is_some() && !aux, ":aux"),
    ];
    match unused.iter().find(|(bad, _)| *bad) {
        Some((_, opt)) => fail(ErrorKind::WrongPremiseShape, format!("option {opt} does not apply")),
        None => Ok(()),
    }
}

fn template(app: &RuleApp) -> Result<(&Ident, &Formula), Fail> {
    match &app.aux {
        Some(Aux::Template { var, formula }) => Ok((var, formula)),
        _ => fail(ErrorKind::WrongPremiseShape, "missing template `:aux x. A`"),
    }
}

/// A term `t` with `a[t/x]` alpha-equal to `target`, if one exists.
pub fn instance_term(a: &Formula, x: &str, target: &Formula) -> Option<Term> {
    fn terms(s: &Term, t: &Term, x: &str) -> Option<Term> {
        match (s, t) {
            (Term::Var(v), _) if v == x => Some(t.clone()),
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).find_map(|(s, t)| terms(s, t, x))
            }
            _ => None,
        }
    }
    fn go(a: &Formula, b: &Formula, x: &str) -> Option<Term> {
        match (a, b) {
            (Formula::Pred(p, xs), Formula::Pred(q, ys)) if p == q && xs.len() == ys.len() => {
                xs.iter().zip(ys).find_map(|(s, t)| terms(s, t, x))
            }
            (Formula::Eq(s1, s2), Formula::Eq(t1, t2)) => terms(s1, t1, x).or_else(|| terms(s2, t2, x)),
            (Formula::Exists(s), Formula::Exists(t)) => terms(s, t, x),
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => go(a1, b1, x).or_else(|| go(a2, b2, x)),
            (Formula::All(v, a1), Formula::All(_, b1)) | (Formula::Ex(v, a1), Formula::Ex(_, b1)) => {
                if v == x {
                    None
                } else {
                    go(a1, b1, x)
                }
            }
            (Formula::Iota(v, a1, a2), Formula::Iota(_, b1, b2)) => {
                if v == x {
                    None
                } else {
                    go(a1, b1, x).or_else(|| go(a2, b2, x))
                }
            }
            _ => None,
        }
    }
    let t = if a.has_free(x) { go(a, target, x)? } else { Term::Var(x.to_string()) };
    same(&substitute(a, x, &t), target).then_some(t)
}

/// The instantiating term of a quantifier rule: the `:witness` option,
/// else the term of the existence premise, else one read off the instance.
fn witness_of(app: &RuleApp, exists: Option<&Formula>, a: &Formula, x: &str, inst: &Formula) -> Result<Term, Fail> {
    if let Some(t) = &app.witness {
        return Ok(t.clone());
    }
    if let Some(Formula::Exists(t)) = exists {
        return Ok(t.clone());
    }
    match instance_term(a, x, inst) {
        Some(t) => Ok(t),
        None => fail(ErrorKind::WrongPremiseShape, format!("`{inst}` is not an instance of `{a}` at `{x}`")),
    }
}

fn index_of(app: &RuleApp, args: &[Term], target: &Formula) -> Result<usize, Fail> {
    let i = match &app.aux {
        Some(Aux::Index(i)) => *i,
        Some(Aux::Template { .. }) => return fail(ErrorKind::WrongPremiseShape, "expected an argument index"),
        None => match args.iter().position(|t| same(&Formula::exists(t.clone()), target)) {
            Some(i) => i + 1,
            None => return fail(ErrorKind::ConclusionMismatch, format!("`{target}` names no argument of the premise")),
        },
    };
    if i == 0 || i > args.len() {
        return fail(ErrorKind::WrongPremiseShape, format!("argument index {i} out of range 1..={}", args.len()));
    }
    Ok(i - 1)
}

fn eq_parts(a: &Formula) -> Option<(&Term, &Term)> {
    match a {
        Formula::Eq(s, t) => Some((s, t)),
        _ => None,
    }
}

fn rule_shape(app: &RuleApp, premises: &[Deduction], c: &Formula, mode: Mode) -> Result<Shape, Fail> {
    use ErrorKind::*;
    let p = |i: usize| premises[i].conclusion();
    let free = mode.is_free();
    match app.rule {
        Rule::AndI => {
            no_options(app, false, false, false)?;
            count(premises, 2)?;
            expect_conclusion(c, &Formula::and(p(0).clone(), p(1).clone()))?;
            Ok(Shape::default())
        }
        Rule::AndEL | Rule::AndER => {
            no_options(app, false, false, false)?;
            count(premises, 1)?;
            let Formula::And(a, b) = p(0) else {
                return fail(WrongPremiseShape, format!("premise `{}` is not a conjunction", p(0)));
            };
            expect_conclusion(c, if app.rule == Rule::AndEL { a } else { b })?;
            Ok(Shape::default())
        }
        Rule::ImpI => {
            no_options(app, false, false, false)?;
            count(premises, 1)?;
            let Formula::Imp(a, b) = c else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not an implication"));
            };
            expect_conclusion(b, p(0))?;
            Ok(Shape { discharges: vec![(0, vec![(**a).clone()])], eigen: None })
        }
        Rule::ImpE => {
            no_options(app, false, false, false)?;
            count(premises, 2)?;
            let Formula::Imp(a, b) = p(0) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not an implication", p(0)));
            };
            expect_premise(premises, 1, a)?;
            expect_conclusion(c, b)?;
            Ok(Shape::default())
        }
        Rule::OrIL | Rule::OrIR => {
            no_options(app, false, false, false)?;
            count(premises, 1)?;
            let Formula::Or(a, b) = c else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not a disjunction"));
            };
            let side = if app.rule == Rule::OrIL { a } else { b };
            expect_conclusion(side, p(0))?;
            Ok(Shape::default())
        }
        Rule::OrE => {
            no_options(app, false, false, false)?;
            count(premises, 3)?;
            let Formula::Or(a, b) = p(0) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not a disjunction", p(0)));
            };
            expect_conclusion(p(1), c)?;
            expect_conclusion(p(2), c)?;
            Ok(Shape { discharges: vec![(1, vec![(**a).clone()]), (2, vec![(**b).clone()])], eigen: None })
        }
        Rule::BottomE | Rule::BottomEGen => {
            no_options(app, false, false, false)?;
            count(premises, 1)?;
            if *p(0) != Formula::Bottom {
                return fail(WrongPremiseShape, format!("premise `{}` is not `_|_`", p(0)));
            }
            if app.rule == Rule::BottomE && !c.is_atomic() {
                return fail(NotAtomic, format!("conclusion `{c}` is not atomic"));
            }
            Ok(Shape::default())
        }
        Rule::AllI => {
            no_options(app, true, false, false)?;
            count(premises, 1)?;
            let Formula::All(x, a) = c else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not universal"));
            };
            let y = app.eigen.clone().unwrap_or_else(|| x.clone());
            if c.has_free(&y) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{y}` is free in `{c}`"));
            }
            expect_conclusion(p(0), &substitute(a, x, &Term::Var(y.clone())))?;
            let discharges = if free { vec![(0, vec![Formula::exists(Term::Var(y.clone()))])] } else { Vec::new() };
            Ok(Shape { discharges, eigen: Some((y, 0)) })
        }
        Rule::AllE => {
            no_options(app, false, true, false)?;
            count(premises, if free { 2 } else { 1 })?;
            let Formula::All(x, a) = p(0) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not universal", p(0)));
            };
            let t = witness_of(app, free.then(|| p(1)), a, x, c)?;
            if free {
                expect_exists(premises, 1, &t)?;
            }
            expect_conclusion(c, &substitute(a, x, &t))?;
            Ok(Shape::default())
        }
        Rule::ExI => {
            no_options(app, false, true, false)?;
            count(premises, if free { 2 } else { 1 })?;
            let Formula::Ex(x, a) = c else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not existential"));
            };
            let t = witness_of(app, free.then(|| p(1)), a, x, p(0))?;
            if free {
                expect_exists(premises, 1, &t)?;
            }
            expect_premise(premises, 0, &substitute(a, x, &t))?;
            Ok(Shape::default())
        }
        Rule::ExE => {
            no_options(app, true, false, false)?;
            count(premises, 2)?;
            let major = p(0);
            let Formula::Ex(x, a) = major else {
                return fail(WrongPremiseShape, format!("major premise `{major}` is not existential"));
            };
            expect_conclusion(p(1), c)?;
            let y = app.eigen.clone().unwrap_or_else(|| x.clone());
            if major.has_free(&y) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{y}` is free in `{major}`"));
            }
            if c.has_free(&y) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{y}` is free in `{c}`"));
            }
            let yv = Term::Var(y.clone());
            let mut set = vec![substitute(a, x, &yv)];
            if free {
                set.push(Formula::exists(yv));
            }
            Ok(Shape { discharges: vec![(1, set)], eigen: Some((y, 1)) })
        }
        Rule::EqI => {
            no_options(app, false, true, false)?;
            count(premises, 0)?;
            if eq_parts(c).filter(|(s, t)| s == t).is_none() {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not of the form `t = t`"));
            }
            if let Some(w) = &app.witness {
                expect_conclusion(c, &Formula::eq(w.clone(), w.clone()))?;
            }
            Ok(Shape::default())
        }
        Rule::EqIn => {
            no_options(app, false, true, false)?;
            count(premises, 1)?;
            let Formula::Exists(t) = p(0) else {
                return fail(WrongPremiseShape, format!("premise `{}` is not of the form `E! t`", p(0)));
            };
            expect_conclusion(c, &Formula::eq(t.clone(), t.clone()))?;
            Ok(Shape::default())
        }
        Rule::EqE | Rule::EqEGen => {
            no_options(app, false, false, true)?;
            count(premises, 2)?;
            let Some((s1, s2)) = eq_parts(p(0)) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not an identity", p(0)));
            };
            let (x, a) = template(app)?;
            if app.rule == Rule::EqE && !a.is_atomic() {
                return fail(NotAtomic, format!("template `{a}` is not atomic"));
            }
            if !a.has_free(x) || s1 == s2 {
                return fail(WrongPremiseShape, "vacuous application: the template must contain its variable and the terms must differ");
            }
            let a1 = substitute(a, x, s1);
            let a2 = substitute(a, x, s2);
            if same(p(1), &a1) {
                expect_conclusion(c, &a2)?;
            } else if same(p(1), &a2) {
                expect_conclusion(c, &a1)?;
            } else {
                return fail(WrongPremiseShape, format!("minor premise should be `{a1}` or `{a2}`, found `{}`", p(1)));
            }
            Ok(Shape::default())
        }
        Rule::AD => {
            no_options(app, false, false, true)?;
            count(premises, 1)?;
            let args: Vec<Term> = match p(0) {
                Formula::Pred(_, args) if !args.is_empty() => args.clone(),
                Formula::Eq(s, t) => vec![s.clone(), t.clone()],
                other => return fail(WrongPremiseShape, format!("premise `{other}` is not an atomic formula with arguments")),
            };
            let i = index_of(app, &args, c)?;
            expect_conclusion(c, &Formula::exists(args[i].clone()))?;
            Ok(Shape::default())
        }
        Rule::FD => {
            no_options(app, false, false, true)?;
            count(premises, 1)?;
            let Formula::Exists(Term::App(_, args)) = p(0) else {
                return fail(WrongPremiseShape, format!("premise `{}` is not of the form `E! f(...)`", p(0)));
            };
            let i = index_of(app, args, c)?;
            expect_conclusion(c, &Formula::exists(args[i].clone()))?;
            Ok(Shape::default())
        }
        Rule::IotaI => {
            no_options(app, true, true, false)?;
            count(premises, if free { 4 } else { 3 })?;
            let Formula::Iota(x, f, g) = c else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not a description"));
            };
            let last = premises.len() - 1;
            let Some((Term::Var(z), t)) = eq_parts(p(last)) else {
                return fail(WrongPremiseShape, format!("last premise `{}` is not of the form `z = t`", p(last)));
            };
            if let Some(e) = &app.eigen {
                if e != z {
                    return fail(WrongPremiseShape, format!("eigenvariable `{e}` does not match `{}`", p(last)));
                }
            }
            if let Some(w) = &app.witness {
                if w != t {
                    return fail(WrongPremiseShape, format!("witness `{w}` does not match `{}`", p(last)));
                }
            }
            if z == x {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{z}` is the bound variable"));
            }
            if t.contains_var(z) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{z}` occurs in `{t}`"));
            }
            if c.has_free(z) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{z}` is free in `{c}`"));
            }
            expect_premise(premises, 0, &substitute(f, x, t))?;
            expect_premise(premises, 1, &substitute(g, x, t))?;
            let zv = Term::Var(z.clone());
            let mut set = vec![substitute(f, x, &zv)];
            if free {
                expect_exists(premises, 2, t)?;
                set.push(Formula::exists(zv));
            }
            Ok(Shape { discharges: vec![(last, set)], eigen: Some((z.clone(), last)) })
        }
        Rule::IotaE1 => {
            no_options(app, true, false, false)?;
            count(premises, 2)?;
            let major = p(0);
            let Formula::Iota(x, f, g) = major else {
                return fail(WrongPremiseShape, format!("major premise `{major}` is not a description"));
            };
            expect_conclusion(p(1), c)?;
            let z = app.eigen.clone().unwrap_or_else(|| x.clone());
            if major.has_free(&z) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{z}` is free in `{major}`"));
            }
            if c.has_free(&z) {
                return fail(EigenviolationInConclusion, format!("eigenvariable `{z}` is free in `{c}`"));
            }
            let zv = Term::Var(z.clone());
            let mut set = vec![substitute(f, x, &zv), substitute(g, x, &zv)];
            if free {
                set.push(Formula::exists(zv));
            }
            Ok(Shape { discharges: vec![(1, set)], eigen: Some((z, 1)) })
        }
        Rule::IotaE2 => {
            no_options(app, false, false, false)?;
            count(premises, if free { 5 } else { 3 })?;
            let Formula::Iota(x, f, _) = p(0) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not a description", p(0)));
            };
            let Some((t1, t2)) = eq_parts(c) else {
                return fail(ConclusionMismatch, format!("conclusion `{c}` is not an identity"));
            };
            let k = if free {
                expect_exists(premises, 1, t1)?;
                expect_exists(premises, 2, t2)?;
                3
            } else {
                1
            };
            expect_premise(premises, k, &substitute(f, x, t1))?;
            expect_premise(premises, k + 1, &substitute(f, x, t2))?;
            Ok(Shape::default())
        }
        Rule::IotaE2A => {
            no_options(app, false, false, true)?;
            count(premises, 6)?;
            let Formula::Iota(x, f, _) = p(0) else {
                return fail(WrongPremiseShape, format!("major premise `{}` is not a description", p(0)));
            };
            let (v, a) = template(app)?;
            if !a.is_atomic() {
                return fail(NotAtomic, format!("template `{a}` is not atomic"));
            }
            let (Formula::Exists(t1), Formula::Exists(t2)) = (p(1), p(2)) else {
                return fail(WrongPremiseShape, "premises 2 and 3 must be existence formulas");
            };
            expect_premise(premises, 3, &substitute(f, x, t1))?;
            expect_premise(premises, 4, &substitute(f, x, t2))?;
            expect_premise(premises, 5, &substitute(a, v, t1))?;
            expect_conclusion(c, &substitute(a, v, t2))?;
            Ok(Shape::default())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `E! t` to `ex x. x = t`.
    Forward,
    /// `ex x. x = t` to `E! t`.
    Backward,
}

/// Hintikka's law in `inf`, either direction, for a term; the bound
/// variable is chosen outside the term.
pub fn derive_hintikka(dir: Direction, t: &Term) -> Deduction {
    let x = fresh_var("x", &t.free_vars());
    let xv = Term::Var(x.clone());
    let body = Formula::eq(xv.clone(), t.clone());
    let ex = Formula::ex(x.clone(), body.clone());
    let exists_t = Formula::exists(t.clone());
    match dir {
        Direction::Forward => {
            let refl = Deduction::infer(
                RuleApp::new(Rule::EqIn),
                vec![Deduction::assume(exists_t.clone())],
                Formula::eq(t.clone(), t.clone()),
            );
            Deduction::infer(RuleApp::new(Rule::ExI).witness(t.clone()), vec![refl, Deduction::assume(exists_t)], ex)
        }
        Direction::Backward => {
            let w = fresh_var("w", &t.free_vars());
            let leibniz = Deduction::infer(
                RuleApp::new(Rule::EqE).template(w.clone(), Formula::exists(Term::Var(w))),
                vec![Deduction::hyp(body, 1), Deduction::hyp(Formula::exists(xv), 1)],
                exists_t.clone(),
            );
            Deduction::infer(
                RuleApp::new(Rule::ExE).eigen(x).label(1),
                vec![Deduction::assume(ex), leibniz],
                exists_t,
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bridge {
    /// `the x [F, G]` to `ex x. (F & all y. (F_y -> y = x) & G)`.
    IotaToRussell,
    /// The converse.
    RussellToIota,
}

/// The Russellian matrix `F & all y. (F_y -> y = x) & G` and the `y` used.
pub fn russell_matrix(f: &Formula, g: &Formula, x: &str) -> (Formula, Ident) {
    let mut avoid: VarSet = f.free_vars();
    avoid.extend(g.free_vars());
    avoid.insert(x.to_string());
    let y = fresh_var("y", &avoid);
    let yv = Term::Var(y.clone());
    let uniq = Formula::all(
        y.clone(),
        Formula::imp(substitute(f, x, &yv), Formula::eq(yv, Term::Var(x.to_string()))),
    );
    (Formula::and(Formula::and(f.clone(), uniq), g.clone()), y)
}

/// The `inf` derivations between a description and its Russellian
/// expansion.
pub fn instantiate_russell_bridge(dir: Bridge, f: &Formula, g: &Formula, x: &str) -> Deduction {
    russell_bridge_in(Mode::Inf, dir, f, g, x)
}

/// As [`instantiate_russell_bridge`], for any mode (`i` omits the existence
/// formulas).
pub fn russell_bridge_in(mode: Mode, dir: Bridge, f: &Formula, g: &Formula, x: &str) -> Deduction {
    let free = mode.is_free();
    let (star, y) = russell_matrix(f, g, x);
    let xv = Term::Var(x.to_string());
    let yv = Term::Var(y.clone());
    let iota = Formula::iota(x, f.clone(), g.clone());
    let russell = Formula::ex(x, star.clone());
    let fy = substitute(f, x, &yv);
    let y_eq_x = Formula::eq(yv.clone(), xv.clone());
    let Formula::And(fu, _) = &star else { unreachable!() };
    let Formula::And(_, uniq) = &**fu else { unreachable!() };
    let (fu, uniq) = ((**fu).clone(), (**uniq).clone());
    let ex_y = Formula::exists(yv.clone());
    let ex_x = Formula::exists(xv.clone());
    match dir {
        Bridge::IotaToRussell => {
            let (l1, l2, l3) = if free { (1, 2, 3) } else { (1, 2, 2) };
            let mut e2 = vec![Deduction::assume(iota.clone())];
            if free {
                e2.push(Deduction::hyp(ex_y.clone(), l2));
                e2.push(Deduction::hyp(ex_x.clone(), l3));
            }
            e2.push(Deduction::hyp(fy.clone(), l1));
            e2.push(Deduction::hyp(f.clone(), l3));
            let e2 = Deduction::infer(RuleApp::new(Rule::IotaE2), e2, y_eq_x.clone());
            let imp = Deduction::infer(RuleApp::new(Rule::ImpI).label(l1), vec![e2], Formula::imp(fy, y_eq_x));
            let all = if free { RuleApp::new(Rule::AllI).eigen(y.clone()).label(l2) } else { RuleApp::new(Rule::AllI).eigen(y.clone()) };
            let all = Deduction::infer(all, vec![imp], uniq);
            let left = Deduction::infer(RuleApp::new(Rule::AndI), vec![Deduction::hyp(f.clone(), l3), all], fu);
            let whole = Deduction::infer(RuleApp::new(Rule::AndI), vec![left, Deduction::hyp(g.clone(), l3)], star);
            let mut exi = vec![whole];
            if free {
                exi.push(Deduction::hyp(ex_x, l3));
            }
            let exi = Deduction::infer(RuleApp::new(Rule::ExI).witness(xv), exi, russell.clone());
            Deduction::infer(
                RuleApp::new(Rule::IotaE1).eigen(x).label(l3),
                vec![Deduction::assume(iota), exi],
                russell,
            )
        }
        Bridge::RussellToIota => {
            let body = |rules: &[Rule], goal: Formula| {
                // `star` then a chain of conjunction eliminations
                let mut d = Deduction::hyp(star.clone(), 2);
                let mut concl = star.clone();
                for r in rules {
                    let Formula::And(a, b) = concl else { unreachable!() };
                    concl = if *r == Rule::AndEL { *a } else { *b };
                    d = Deduction::infer(RuleApp::new(*r), vec![d], concl.clone());
                }
                debug_assert_eq!(concl, goal);
                d
            };
            let get_f = body(&[Rule::AndEL, Rule::AndEL], f.clone());
            let get_g = body(&[Rule::AndER], g.clone());
            let get_u = body(&[Rule::AndEL, Rule::AndER], uniq.clone());
            let mut alle = vec![get_u];
            if free {
                alle.push(Deduction::hyp(ex_y, 1));
            }
            let inst = Deduction::infer(
                RuleApp::new(Rule::AllE).witness(yv.clone()),
                alle,
                Formula::imp(fy.clone(), y_eq_x.clone()),
            );
            let pi = Deduction::infer(RuleApp::new(Rule::ImpE), vec![inst, Deduction::hyp(fy, 1)], y_eq_x);
            let mut ii = vec![get_f, get_g];
            if free {
                ii.push(Deduction::hyp(ex_x, 2));
            }
            ii.push(pi);
            let ii = Deduction::infer(RuleApp::new(Rule::IotaI).eigen(y).label(1), ii, iota.clone());
            Deduction::infer(RuleApp::new(Rule::ExE).eigen(x).label(2), vec![Deduction::assume(russell), ii], iota)
        }
    }
}
