//! Deduction trees and the structural operations on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{alpha_eq, fresh_var, substitute, Formula, Ident, Term, VarSet};

pub type Label = u32;

/// Position of a node: the premise indices taken from the root.
pub type NodePath = Vec<usize>;

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn parse_path(text: &str) -> Option<NodePath> {
    if text == "root" {
        return Some(Vec::new());
    }
    text.split('.').map(|p| p.parse().ok()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    AndI,
    AndEL,
    AndER,
    ImpI,
    ImpE,
    OrIL,
    OrIR,
    OrE,
    BottomE,
    AllI,
    AllE,
    ExI,
    ExE,
    EqI,
    EqIn,
    EqE,
    AD,
    FD,
    IotaI,
    IotaE1,
    IotaE2,
    IotaE2A,
    /// `_|_` to an arbitrary formula; expanded by the elaborator.
    BottomEGen,
    /// Leibniz's law for an arbitrary template; expanded by the elaborator.
    EqEGen,
}

impl Rule {
    pub const ALL: [Rule; 24] = [
        Rule::AndI,
        Rule::AndEL,
        Rule::AndER,
        Rule::ImpI,
        Rule::ImpE,
        Rule::OrIL,
        Rule::OrIR,
        Rule::OrE,
        Rule::BottomE,
        Rule::AllI,
        Rule::AllE,
        Rule::ExI,
        Rule::ExE,
        Rule::EqI,
        Rule::EqIn,
        Rule::EqE,
        Rule::AD,
        Rule::FD,
        Rule::IotaI,
        Rule::IotaE1,
        Rule::IotaE2,
        Rule::IotaE2A,
        Rule::BottomEGen,
        Rule::EqEGen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AndI => "AndI",
            Rule::AndEL => "AndE_L",
            Rule::AndER => "AndE_R",
            Rule::ImpI => "ImpI",
            Rule::ImpE => "ImpE",
            Rule::OrIL => "OrI_L",
            Rule::OrIR => "OrI_R",
            Rule::OrE => "OrE",
            Rule::BottomE => "BottomE",
            Rule::AllI => "AllI",
            Rule::AllE => "AllE",
            Rule::ExI => "ExI",
            Rule::ExE => "ExE",
            Rule::EqI => "EqI",
            Rule::EqIn => "EqI_n",
            Rule::EqE => "EqE",
            Rule::AD => "AD",
            Rule::FD => "FD",
            Rule::IotaI => "IotaI",
            Rule::IotaE1 => "IotaE1",
            Rule::IotaE2 => "IotaE2",
            Rule::IotaE2A => "IotaE2A",
            Rule::BottomEGen => "BottomE_gen",
            Rule::EqEGen => "EqE_gen",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == name)
    }

    pub fn is_intro(self) -> bool {
        matches!(
            self,
            Rule::AndI | Rule::ImpI | Rule::OrIL | Rule::OrIR | Rule::AllI | Rule::ExI | Rule::IotaI
        )
    }

    /// Eliminations of a logical constant; their major premise is premise 0.
    pub fn is_elim(self) -> bool {
        matches!(
            self,
            Rule::AndEL
                | Rule::AndER
                | Rule::ImpE
                | Rule::OrE
                | Rule::BottomE
                | Rule::AllE
                | Rule::ExE
                | Rule::IotaE1
                | Rule::IotaE2
                | Rule::IotaE2A
        )
    }

    /// Rules whose minor premises and conclusion are the same formula.
    pub fn forms_segments(self) -> bool {
        matches!(self, Rule::OrE | Rule::ExE | Rule::IotaE1)
    }

    pub fn is_derived(self) -> bool {
        matches!(self, Rule::BottomEGen | Rule::EqEGen)
    }

    pub fn has_eigenvariable(self) -> bool {
        matches!(self, Rule::AllI | Rule::ExE | Rule::IotaI | Rule::IotaE1)
    }

    /// Premises in which this rule discharges assumptions (and, for rules
    /// with an eigenvariable, the region that variable is confined to).
    pub fn discharge_scope(self, premise_count: usize) -> Vec<usize> {
        match self {
            Rule::ImpI | Rule::AllI => vec![0],
            Rule::OrE => vec![1, 2],
            Rule::ExE | Rule::IotaE1 => vec![1],
            Rule::IotaI if premise_count > 0 => vec![premise_count - 1],
            _ => Vec::new(),
        }
    }

    /// Where a rule's eigenvariable may occur.
    pub fn eigen_region(self, premise_count: usize) -> Option<usize> {
        if self.has_eigenvariable() {
            self.discharge_scope(premise_count).first().copied()
        } else {
            None
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aux {
    /// 1-based argument position for AD and FD.
    Index(usize),
    /// Template `A` with its distinguished variable, for EqE and IotaE2A.
    Template { var: Ident, formula: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApp {
    pub rule: Rule,
    pub eigen: Option<Ident>,
    pub witness: Option<Term>,
    pub label: Option<Label>,
    pub aux: Option<Aux>,
}

impl RuleApp {
    pub fn new(rule: Rule) -> RuleApp {
        RuleApp { rule, eigen: None, witness: None, label: None, aux: None }
    }

    pub fn eigen(mut self, v: impl Into<Ident>) -> RuleApp {
        self.eigen = Some(v.into());
        self
    }

    pub fn witness(mut self, t: Term) -> RuleApp {
        self.witness = Some(t);
        self
    }

    pub fn label(mut self, n: Label) -> RuleApp {
        self.label = Some(n);
        self
    }

    pub fn index(mut self, i: usize) -> RuleApp {
        self.aux = Some(Aux::Index(i));
        self
    }

    pub fn template(mut self, var: impl Into<Ident>, formula: Formula) -> RuleApp {
        self.aux = Some(Aux::Template { var: var.into(), formula });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deduction {
    Assumption { formula: Formula, label: Option<Label> },
    Inference { rule: RuleApp, premises: Vec<Deduction>, conclusion: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("variable `{0}` is the eigenvariable of a rule application")]
    EigenClash(Ident),
}

impl Deduction {
    pub fn assume(formula: Formula) -> Deduction {
        Deduction::Assumption { formula, label: None }
    }

    pub fn hyp(formula: Formula, label: Label) -> Deduction {
        Deduction::Assumption { formula, label: Some(label) }
    }

    pub fn infer(rule: RuleApp, premises: Vec<Deduction>, conclusion: Formula) -> Deduction {
        Deduction::Inference { rule, premises, conclusion }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Deduction::Assumption { formula, .. } => formula,
            Deduction::Inference { conclusion, .. } => conclusion,
        }
    }

    pub fn premises(&self) -> &[Deduction] {
        match self {
            Deduction::Assumption { .. } => &[],
            Deduction::Inference { premises, .. } => premises,
        }
    }

    pub fn rule(&self) -> Option<&RuleApp> {
        match self {
            Deduction::Assumption { .. } => None,
            Deduction::Inference { rule, .. } => Some(rule),
        }
    }

    pub fn rule_id(&self) -> Option<Rule> {
        self.rule().map(|r| r.rule)
    }

    pub fn size(&self) -> usize {
        1 + self.premises().iter().map(Deduction::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises().iter().map(Deduction::depth).max().unwrap_or(0)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Deduction> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises().get(*i)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Deduction> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => match self {
                Deduction::Assumption { .. } => None,
                Deduction::Inference { premises, .. } => premises.get_mut(*i)?.at_mut(rest),
            },
        }
    }

    /// Visits every node in preorder with its path.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&NodePath, &'a Deduction)) {
        fn go<'a>(d: &'a Deduction, path: &mut NodePath, f: &mut impl FnMut(&NodePath, &'a Deduction)) {
            f(path, d);
            for (i, p) in d.premises().iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f);
    }

    /// Every formula stored in the tree, including rule templates.
    pub fn formulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.walk(&mut |_, d| {
            out.push(d.conclusion());
            if let Some(RuleApp { aux: Some(Aux::Template { formula, .. }), .. }) = d.rule() {
                out.push(formula);
            }
        });
        out
    }

    /// Every variable name occurring anywhere in the tree.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.walk(&mut |_, d| {
            d.conclusion().collect_all_vars(&mut out);
            if let Some(r) = d.rule() {
                if let Some(e) = &r.eigen {
                    out.insert(e.clone());
                }
                if let Some(t) = &r.witness {
                    out.extend(t.free_vars());
                }
                if let Some(Aux::Template { var, formula }) = &r.aux {
                    out.insert(var.clone());
                    formula.collect_all_vars(&mut out);
                }
            }
        });
        out
    }

    pub fn labels_in_use(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.walk(&mut |_, d| match d {
            Deduction::Assumption { label: Some(l), .. } => {
                out.insert(*l);
            }
            Deduction::Inference { rule: RuleApp { label: Some(l), .. }, .. } => {
                out.insert(*l);
            }
            _ => {}
        });
        out
    }
}

/// An assumption leaf that no rule inside the deduction discharges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenAssumption {
    pub formula: Formula,
    pub label: Option<Label>,
    pub path: NodePath,
}

pub fn open_assumptions_detailed(d: &Deduction) -> Vec<OpenAssumption> {
    fn go(d: &Deduction, path: &mut NodePath, out: &mut Vec<OpenAssumption>) {
        match d {
            Deduction::Assumption { formula, label } => out.push(OpenAssumption {
                formula: formula.clone(),
                label: *label,
                path: path.clone(),
            }),
            Deduction::Inference { rule, premises, .. } => {
                let scope = rule.rule.discharge_scope(premises.len());
                for (i, p) in premises.iter().enumerate() {
                    path.push(i);
                    let mut sub = Vec::new();
                    go(p, path, &mut sub);
                    path.pop();
                    if scope.contains(&i) && rule.label.is_some() {
                        sub.retain(|a| a.label != rule.label);
                    }
                    out.extend(sub);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(d, &mut Vec::new(), &mut out);
    out
}

/// The formulas of the undischarged assumptions, with multiplicity.
pub fn open_assumptions(d: &Deduction) -> Vec<Formula> {
    open_assumptions_detailed(d).into_iter().map(|a| a.formula).collect()
}

/// Replaces the variable `x` by `t` throughout the deduction.
pub fn subst_deduction(d: &Deduction, x: &str, t: &Term) -> Result<Deduction, ProofError> {
    let mut clash = None;
    d.walk(&mut |_, n| {
        if let Some(RuleApp { eigen: Some(e), .. }) = n.rule() {
            if e == x {
                clash = Some(e.clone());
            }
        }
    });
    if let Some(e) = clash {
        if *t != Term::Var(x.to_string()) {
            return Err(ProofError::EigenClash(e));
        }
    }
    Ok(replace_var(d, x, t))
}

/// Substitution that also rewrites eigenvariable fields equal to `x`
/// (only meaningful when `t` is a variable).
fn replace_var(d: &Deduction, x: &str, t: &Term) -> Deduction {
    match d {
        Deduction::Assumption { formula, label } => {
            Deduction::Assumption { formula: substitute(formula, x, t), label: *label }
        }
        Deduction::Inference { rule, premises, conclusion } => {
            let mut rule = rule.clone();
            if let (Some(e), Term::Var(y)) = (&rule.eigen, t) {
                if e == x {
                    rule.eigen = Some(y.clone());
                }
            }
            rule.witness = rule.witness.map(|w| w.substitute(x, t));
            if let Some(Aux::Template { var, formula }) = &rule.aux {
                if var != x {
                    let formula = substitute(
                        &Formula::all(var.clone(), formula.clone()),
                        x,
                        t,
                    );
                    if let Formula::All(var, body) = formula {
                        rule.aux = Some(Aux::Template { var, formula: *body });
                    }
                }
            }
            Deduction::Inference {
                rule,
                premises: premises.iter().map(|p| replace_var(p, x, t)).collect(),
                conclusion: substitute(conclusion, x, t),
            }
        }
    }
}

/// Renames eigenvariables so that each application of AllI, ExE, IotaI and
/// IotaE1 owns its variable: it occurs nowhere outside the rule's region
/// and no other such application uses it.
pub fn freshen(d: &Deduction) -> Deduction {
    let mut cur = d.clone();
    // Each pass fixes the first offending application in preorder.
    loop {
        let Some((path, var)) = first_unowned(&cur) else {
            return cur;
        };
        let mut avoid = cur.all_vars();
        avoid.insert(var.clone());
        let new = fresh_var(&var, &avoid);
        let node = cur.at(&path).expect("path from walk");
        let region = node
            .rule_id()
            .and_then(|r| r.eigen_region(node.premises().len()))
            .expect("eigen rule has a region");
        let Deduction::Inference { rule, premises, conclusion } = node.clone() else {
            unreachable!()
        };
        let mut premises = premises;
        premises[region] = replace_var(&premises[region], &var, &Term::Var(new.clone()));
        let rule = RuleApp { eigen: Some(new), ..rule };
        *cur.at_mut(&path).expect("path from walk") = Deduction::Inference { rule, premises, conclusion };
    }
}

fn first_unowned(d: &Deduction) -> Option<(NodePath, Ident)> {
    let mut apps: Vec<(NodePath, Ident, usize)> = Vec::new();
    d.walk(&mut |path, n| {
        if let Some(RuleApp { rule, eigen: Some(e), .. }) = n.rule() {
            if let Some(region) = rule.eigen_region(n.premises().len()) {
                apps.push((path.clone(), e.clone(), region));
            }
        }
    });
    let mut claimed: BTreeSet<&Ident> = BTreeSet::new();
    for (path, var, region) in &apps {
        let mut region_path = path.clone();
        region_path.push(*region);
        let leaks = claimed.contains(var) || occurs_free_outside(d, var, &region_path);
        if leaks {
            return Some((path.clone(), var.clone()));
        }
        claimed.insert(var);
    }
    None
}

fn occurs_free_outside(d: &Deduction, var: &str, region: &[usize]) -> bool {
    let mut found = false;
    d.walk(&mut |path, n| {
        if found || path.starts_with(region) {
            return;
        }
        if n.conclusion().has_free(var) {
            found = true;
        }
    });
    found
}

/// Renumbers discharge labels 1, 2, ... in preorder so that every label is
/// cited by exactly one rule application.
pub fn relabel(d: &Deduction) -> Deduction {
    fn go(d: &Deduction, env: &mut Vec<(Label, Label)>, next: &mut Label) -> Deduction {
        match d {
            Deduction::Assumption { formula, label } => Deduction::Assumption {
                formula: formula.clone(),
                label: label.map(|l| {
                    env.iter().rev().find(|(old, _)| *old == l).map(|(_, new)| *new).unwrap_or(l)
                }),
            },
            Deduction::Inference { rule, premises, conclusion } => {
                let mut rule = rule.clone();
                let scope = rule.rule.discharge_scope(premises.len());
                let binding = rule.label.map(|old| {
                    let new = *next;
                    *next += 1;
                    (old, new)
                });
                rule.label = binding.map(|(_, new)| new);
                let premises = premises
                    .iter()
                    .enumerate()
                    .map(|(i, p)| match binding {
                        Some(b) if scope.contains(&i) => {
                            env.push(b);
                            let r = go(p, env, next);
                            env.pop();
                            r
                        }
                        _ => go(p, env, next),
                    })
                    .collect();
                Deduction::Inference { rule, premises, conclusion: conclusion.clone() }
            }
        }
    }
    go(d, &mut Vec::new(), &mut 1)
}

/// Replaces the assumptions discharged under `label` by deductions chosen
/// from their formula. Leaves for which `pick` returns `None` stay.
pub fn graft(d: &Deduction, label: Label, pick: &impl Fn(&Formula) -> Option<Deduction>) -> Deduction {
    match d {
        Deduction::Assumption { formula, label: Some(l) } if *l == label => {
            pick(formula).unwrap_or_else(|| d.clone())
        }
        Deduction::Assumption { .. } => d.clone(),
        Deduction::Inference { rule, premises, conclusion } => Deduction::Inference {
            rule: rule.clone(),
            premises: premises.iter().map(|p| graft(p, label, pick)).collect(),
            conclusion: conclusion.clone(),
        },
    }
}

/// Structural equality with formulas compared up to alpha and labels up to
/// a consistent renaming.
pub fn same_tree(a: &Deduction, b: &Deduction) -> bool {
    fn go(a: &Deduction, b: &Deduction, map: &mut HashMap<Label, Label>, back: &mut HashMap<Label, Label>) -> bool {
        let mut labels = |x: Option<Label>, y: Option<Label>| match (x, y) {
            (None, None) => true,
            (Some(x), Some(y)) => {
                *map.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x
            }
            _ => false,
        };
        match (a, b) {
            (
                Deduction::Assumption { formula: f, label: l },
                Deduction::Assumption { formula: g, label: m },
            ) => alpha_eq(f, g) && labels(*l, *m),
            (
                Deduction::Inference { rule: r, premises: ps, conclusion: c },
                Deduction::Inference { rule: s, premises: qs, conclusion: e },
            ) => {
                let aux_eq = match (&r.aux, &s.aux) {
                    (None, None) => true,
                    (Some(Aux::Index(i)), Some(Aux::Index(j))) => i == j,
                    (
                        Some(Aux::Template { var: x, formula: f }),
                        Some(Aux::Template { var: y, formula: g }),
                    ) => alpha_eq(&Formula::all(x.clone(), f.clone()), &Formula::all(y.clone(), g.clone())),
                    _ => false,
                };
                r.rule == s.rule
                    && r.eigen == s.eigen
                    && r.witness == s.witness
                    && aux_eq
                    && labels(r.label, s.label)
                    && alpha_eq(c, e)
                    && ps.len() == qs.len()
                    && ps.iter().zip(qs).all(|(p, q)| go(p, q, map, back))
            }
            _ => false,
        }
    }
    go(a, b, &mut HashMap::new(), &mut HashMap::new())
}

/// Multiset inclusion of formulas up to alpha.
pub fn support_subset(small: &[Formula], big: &[Formula]) -> bool {
    small.iter().all(|f| big.iter().any(|g| alpha_eq(f, g)))
}

pub fn rule_counts(d: &Deduction) -> BTreeMap<Rule, usize> {
    let mut out = BTreeMap::new();
    d.walk(&mut |_, n| {
        if let Some(r) = n.rule_id() {
            *out.entry(r).or_insert(0) += 1;
        }
    });
    out
}
