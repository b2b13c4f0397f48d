//! Maximal segments, ranks, and the reduction procedures that remove them.

use std::fmt;

use crate::calculus::instance_term;
use crate::proof::{
    freshen, graft, path_string, relabel, subst_deduction, Aux, Deduction, NodePath, ProofError, Rule, RuleApp,
};
use crate::syntax::{alpha_eq, degree, fresh_var, substitute, Formula, Term};

/// A chain of occurrences of one formula, listed from the top down: the
/// first is concluded by an introduction, each later one is the conclusion
/// of an OrE, ExE or IotaE1 whose minor premise is the previous one, and
/// the last is the major premise of an elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub formulas: Vec<NodePath>,
    pub degree: usize,
    /// The elimination whose major premise ends the segment.
    pub elim: NodePath,
    /// An identity from IotaE2A fed to EqE rather than a logical detour.
    pub identity: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn top(&self) -> &NodePath {
        &self.formulas[0]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    pub d: usize,
    pub l: usize,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.d, self.l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    DetourAnd,
    DetourImp,
    DetourOr,
    DetourAll,
    DetourEx,
    DetourIota1,
    DetourIota2,
    DetourIota2A,
    Permute(Rule, Rule),
    IdentityRedundancy,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::Permute(e, s) => write!(f, "Permute({e},{s})"),
            other => fmt::Debug::fmt(other, f),
        }
    }
}

impl ReductionKind {
    pub fn parse(text: &str) -> Option<ReductionKind> {
        use ReductionKind::*;
        if let Some(inner) = text.strip_prefix("Permute(").and_then(|r| r.strip_suffix(')')) {
            let (e, s) = inner.split_once(',')?;
            return Some(Permute(Rule::from_name(e.trim())?, Rule::from_name(s.trim())?));
        }
        [DetourAnd, DetourImp, DetourOr, DetourAll, DetourEx, DetourIota1, DetourIota2, DetourIota2A, IdentityRedundancy]
            .into_iter()
            .find(|k| k.to_string() == text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: ReductionKind,
    /// First formula of the reduced segment, in the tree before the step.
    pub path: NodePath,
    pub before: Rank,
    pub after: Rank,
}

impl Step {
    pub fn line(&self, n: usize) -> String {
        format!("{n} {} {} {}->{}", self.kind, path_string(&self.path), self.before, self.after)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("no maximal segment starts at {0}")]
    NotReducible(String),
    #[error("gave up after {0} reduction steps")]
    StepLimit(usize),
    #[error(transparent)]
    Clash(#[from] ProofError),
}

#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    /// Remove IotaI/IotaE2A detours by first deriving the identity of the
    /// two instances and then applying one Leibniz step, instead of two
    /// Leibniz steps through the introduced term.
    pub iota2a_via_identity: bool,
    pub max_steps: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { iota2a_via_identity: false, max_steps: 1_000_000 }
    }
}

fn introduces(intro: Rule, elim: Rule) -> bool {
    matches!(
        (intro, elim),
        (Rule::AndI, Rule::AndEL | Rule::AndER)
            | (Rule::ImpI, Rule::ImpE)
            | (Rule::OrIL | Rule::OrIR, Rule::OrE)
            | (Rule::AllI, Rule::AllE)
            | (Rule::ExI, Rule::ExE)
            | (Rule::IotaI, Rule::IotaE1 | Rule::IotaE2 | Rule::IotaE2A)
    )
}

fn minors_of(r: Rule) -> &'static [usize] {
    match r {
        Rule::OrE => &[1, 2],
        _ => &[1],
    }
}

/// IotaE2A used to conclude `t1 = t2` from `t1 = t1`.
fn is_refl_identity(d: &Deduction) -> bool {
    if d.rule_id() != Some(Rule::IotaE2A) {
        return false;
    }
    let ps = d.premises();
    match (ps[1].conclusion(), ps[5].conclusion(), d.conclusion()) {
        (Formula::Exists(t1), Formula::Eq(a, b), Formula::Eq(c, _)) => a == t1 && b == t1 && c == t1,
        _ => false,
    }
}

pub fn find_maximal(d: &Deduction) -> Vec<Segment> {
    fn chains(n: &Deduction, path: &mut NodePath, elim: &NodePath, rule: Rule, acc: &mut Vec<NodePath>, out: &mut Vec<Segment>) {
        acc.push(path.clone());
        match n.rule_id() {
            Some(r) if introduces(r, rule) => {
                let mut formulas = acc.clone();
                formulas.reverse();
                out.push(Segment { formulas, degree: degree(n.conclusion()), elim: elim.clone(), identity: false });
            }
            Some(r) if r.forms_segments() => {
                for &i in minors_of(r) {
                    path.push(i);
                    chains(&n.premises()[i], path, elim, rule, acc, out);
                    path.pop();
                }
            }
            _ => {}
        }
        acc.pop();
    }
    let mut out = Vec::new();
    d.walk(&mut |path, n| {
        let Some(r) = n.rule_id() else { return };
        if n.premises().is_empty() {
            return;
        }
        let mut major = path.clone();
        major.push(0);
        if r == Rule::EqE && is_refl_identity(&n.premises()[0]) {
            out.push(Segment { formulas: vec![major], degree: 0, elim: path.clone(), identity: true });
        } else if r.is_elim() {
            chains(&n.premises()[0], &mut major, path, r, &mut Vec::new(), &mut out);
        }
    });
    out
}

pub fn rank_of(segments: &[Segment]) -> Rank {
    let d = segments.iter().map(|s| s.degree).max().unwrap_or(0);
    let l = segments.iter().filter(|s| s.degree == d).map(|s| s.len()).sum();
    Rank { d, l }
}

pub fn rank(d: &Deduction) -> Rank {
    rank_of(&find_maximal(d))
}

pub fn kind_of(d: &Deduction, s: &Segment) -> ReductionKind {
    let elim = d.at(&s.elim).and_then(|n| n.rule_id()).expect("segment elimination");
    if s.identity {
        return ReductionKind::IdentityRedundancy;
    }
    if s.len() > 1 {
        let through = d.at(&s.formulas[s.len() - 1]).and_then(|n| n.rule_id()).expect("segment former");
        return ReductionKind::Permute(elim, through);
    }
    match elim {
        Rule::AndEL | Rule::AndER => ReductionKind::DetourAnd,
        Rule::ImpE => ReductionKind::DetourImp,
        Rule::OrE => ReductionKind::DetourOr,
        Rule::AllE => ReductionKind::DetourAll,
        Rule::ExE => ReductionKind::DetourEx,
        Rule::IotaE1 => ReductionKind::DetourIota1,
        Rule::IotaE2 => ReductionKind::DetourIota2,
        Rule::IotaE2A => ReductionKind::DetourIota2A,
        other => unreachable!("{other} has no introduction"),
    }
}

/// Subtrees the reduction of `s` copies or moves under new assumptions.
fn sensitive_roots(d: &Deduction, s: &Segment) -> Vec<NodePath> {
    let mut roots = Vec::new();
    if s.identity {
        return roots;
    }
    let e = d.at(&s.elim).expect("segment elimination");
    for i in 1..e.premises().len() {
        let mut p = s.elim.clone();
        p.push(i);
        roots.push(p);
    }
    if s.len() == 1 {
        let top = d.at(s.top()).expect("segment top");
        for i in 0..top.premises().len() {
            let mut p = s.top().clone();
            p.push(i);
            roots.push(p);
        }
    }
    roots
}

/// The segment to reduce next: of highest degree; preferably one none of
/// whose copied subtrees holds another segment of that degree; then the
/// longest; then the one whose top is furthest right.
pub fn select(d: &Deduction, segs: &[Segment]) -> Option<usize> {
    let top = segs.iter().map(|s| s.degree).max()?;
    let order = |a: &usize, b: &usize| {
        let (x, y) = (&segs[*a], &segs[*b]);
        x.len().cmp(&y.len()).then_with(|| x.top().cmp(y.top()))
    };
    let high: Vec<usize> = (0..segs.len()).filter(|&i| segs[i].degree == top).collect();
    let clean: Vec<usize> = high
        .iter()
        .copied()
        .filter(|&i| {
            let roots = sensitive_roots(d, &segs[i]);
            !high.iter().any(|&j| {
                j != i && segs[j].formulas.iter().any(|f| roots.iter().any(|r| f.starts_with(r)))
            })
        })
        .collect();
    let pool = if clean.is_empty() { &high } else { &clean };
    pool.iter().copied().max_by(order)
}

fn parts(d: &Deduction) -> (&RuleApp, &[Deduction], &Formula) {
    match d {
        Deduction::Inference { rule, premises, conclusion } => (rule, premises, conclusion),
        Deduction::Assumption { .. } => unreachable!("expected an inference"),
    }
}

/// Replaces assumptions under `label` by the deduction paired with the
/// first alpha-equal formula.
fn plug(d: &Deduction, label: Option<u32>, with: &[(Formula, &Deduction)]) -> Deduction {
    let Some(label) = label else { return d.clone() };
    graft(d, label, &|f| with.iter().find(|(g, _)| alpha_eq(f, g)).map(|(_, s)| (*s).clone()))
}

fn witness(app: &RuleApp, exists: Option<&Formula>, body: &Formula, x: &str, inst: &Formula) -> Term {
    if let Some(t) = &app.witness {
        return t.clone();
    }
    if let Some(Formula::Exists(t)) = exists {
        return t.clone();
    }
    instance_term(body, x, inst).unwrap_or_else(|| Term::Var(x.to_string()))
}

fn leibniz(major: Deduction, minor: Deduction, var: &str, template: &Formula, conclusion: Formula) -> Deduction {
    Deduction::infer(RuleApp::new(Rule::EqE).template(var, template.clone()), vec![major, minor], conclusion)
}

/// `t = s` into `u = s`-style templates: a variable not in the given terms.
fn template_var(ts: &[&Term]) -> String {
    let mut avoid = std::collections::BTreeSet::new();
    for t in ts {
        avoid.extend(t.free_vars());
    }
    fresh_var("w", &avoid)
}

struct IotaIntro<'a> {
    t: Term,
    z: String,
    label: Option<u32>,
    f: Formula,
    x: String,
    sigmas: &'a [Deduction],
    pi: &'a Deduction,
    free: bool,
}

fn iota_intro(d: &Deduction) -> IotaIntro<'_> {
    let (app, ps, c) = parts(d);
    let Formula::Iota(x, f, _) = c else { unreachable!("IotaI concludes a description") };
    let pi = ps.last().expect("IotaI premise");
    let Formula::Eq(Term::Var(z), t) = pi.conclusion() else { unreachable!("IotaI last premise") };
    IotaIntro {
        t: t.clone(),
        z: z.clone(),
        label: app.label,
        f: (**f).clone(),
        x: x.clone(),
        sigmas: &ps[..ps.len() - 1],
        pi,
        free: ps.len() == 4,
    }
}

impl IotaIntro<'_> {
    /// `Pi` with `z` replaced by `s`, its discharged `F_z` and `E! z` filled
    /// by the given deductions.
    fn instance(&self, s: &Term, f_s: &Deduction, exists_s: Option<&Deduction>) -> Result<Deduction, ProofError> {
        let zv = Term::Var(self.z.clone());
        let mut with = vec![(substitute(&self.f, &self.x, &zv), f_s)];
        if let Some(e) = exists_s {
            with.push((Formula::exists(zv.clone()), e));
        }
        subst_deduction(&plug(self.pi, self.label, &with), &self.z, s)
    }

    /// `s = s` in the system the introduction comes from.
    fn refl(&self, s: &Term, exists_s: Option<&Deduction>) -> Deduction {
        let c = Formula::eq(s.clone(), s.clone());
        match exists_s {
            Some(e) if self.free => Deduction::infer(RuleApp::new(Rule::EqIn), vec![e.clone()], c),
            _ => Deduction::infer(RuleApp::new(Rule::EqI).witness(s.clone()), vec![], c),
        }
    }
}

/// `u = v` from derivations of `u = t1` and `v = t1`.
fn join_identities(
    intro: &IotaIntro<'_>,
    u: &Term,
    v: &Term,
    to_u: Deduction,
    to_v: Deduction,
    exists_v: Option<&Deduction>,
) -> Deduction {
    let t1 = &intro.t;
    let goal = Formula::eq(u.clone(), v.clone());
    if v == t1 {
        return to_u;
    }
    if u == t1 {
        // from v = t1 and v = v conclude t1 = v
        let w = template_var(&[v]);
        let tmpl = Formula::eq(Term::Var(w.clone()), v.clone());
        return leibniz(to_v, intro.refl(v, exists_v), &w, &tmpl, goal);
    }
    let w = template_var(&[u]);
    let tmpl = Formula::eq(u.clone(), Term::Var(w.clone()));
    leibniz(to_v, to_u, &w, &tmpl, goal)
}

/// Applies the reduction for `s`, which must be one of `find_maximal(d)`.
/// `d` should have every eigenvariable owned by its rule (see `freshen`).
pub fn reduce_once(d: &Deduction, s: &Segment) -> Result<Deduction, NormalizeError> {
    reduce_once_with(d, s, &NormalizeOptions::default())
}

pub fn reduce_once_with(d: &Deduction, s: &Segment, opts: &NormalizeOptions) -> Result<Deduction, NormalizeError> {
    if !find_maximal(d).contains(s) {
        return Err(NormalizeError::NotReducible(path_string(s.formulas.first().map_or(&[][..], |p| p))));
    }
    let kind = kind_of(d, s);
    let e = d.at(&s.elim).expect("segment elimination");
    let replacement = reduce_at(e, kind, opts)?;
    let mut out = d.clone();
    *out.at_mut(&s.elim).expect("segment elimination") = replacement;
    Ok(out)
}

fn reduce_at(e: &Deduction, kind: ReductionKind, opts: &NormalizeOptions) -> Result<Deduction, NormalizeError> {
    let (eapp, eps, ec) = parts(e);
    let major = &eps[0];
    use ReductionKind::*;
    Ok(match kind {
        Permute(..) => {
            let (sapp, sps, _) = parts(major);
            let mut branches = sps.to_vec();
            for &i in minors_of(sapp.rule) {
                let mut premises = vec![branches[i].clone()];
                premises.extend(eps[1..].iter().cloned());
                branches[i] = Deduction::infer(eapp.clone(), premises, ec.clone());
            }
            Deduction::infer(sapp.clone(), branches, ec.clone())
        }
        IdentityRedundancy => {
            let (iapp, ips, _) = parts(major);
            let Some(Aux::Template { var, formula }) = &eapp.aux else { unreachable!("checked EqE") };
            let Formula::Exists(t1) = ips[1].conclusion() else { unreachable!("checked IotaE2A") };
            let minor = eps[1].clone();
            let forward = alpha_eq(minor.conclusion(), &substitute(formula, var, t1));
            let (a, b, fa, fb) = if forward { (1, 2, 3, 4) } else { (2, 1, 4, 3) };
            let premises = vec![ips[0].clone(), ips[a].clone(), ips[b].clone(), ips[fa].clone(), ips[fb].clone(), minor];
            let app = RuleApp { aux: eapp.aux.clone(), ..iapp.clone() };
            Deduction::infer(app, premises, ec.clone())
        }
        DetourAnd => {
            let (_, ips, _) = parts(major);
            if eapp.rule == Rule::AndEL { ips[0].clone() } else { ips[1].clone() }
        }
        DetourImp => {
            let (iapp, ips, ic) = parts(major);
            let Formula::Imp(a, _) = ic else { unreachable!() };
            plug(&ips[0], iapp.label, &[((**a).clone(), &eps[1])])
        }
        DetourOr => {
            let (iapp, ips, ic) = parts(major);
            let Formula::Or(a, b) = ic else { unreachable!() };
            if iapp.rule == Rule::OrIL {
                plug(&eps[1], eapp.label, &[((**a).clone(), &ips[0])])
            } else {
                plug(&eps[2], eapp.label, &[((**b).clone(), &ips[0])])
            }
        }
        DetourAll => {
            let (iapp, ips, ic) = parts(major);
            let Formula::All(x, body) = ic else { unreachable!() };
            let y = iapp.eigen.clone().unwrap_or_else(|| x.clone());
            let t = witness(eapp, eps.get(1).map(|p| p.conclusion()), body, x, ec);
            let pi = match eps.get(1) {
                Some(ex) => plug(&ips[0], iapp.label, &[(Formula::exists(Term::Var(y.clone())), ex)]),
                None => ips[0].clone(),
            };
            subst_deduction(&pi, &y, &t)?
        }
        DetourEx => {
            let (iapp, ips, ic) = parts(major);
            let Formula::Ex(x, body) = ic else { unreachable!() };
            let y = eapp.eigen.clone().unwrap_or_else(|| x.clone());
            let t = witness(iapp, ips.get(1).map(|p| p.conclusion()), body, x, ips[0].conclusion());
            let yv = Term::Var(y.clone());
            let mut with = vec![(substitute(body, x, &yv), &ips[0])];
            if let Some(ex) = ips.get(1) {
                with.push((Formula::exists(yv), ex));
            }
            subst_deduction(&plug(&eps[1], eapp.label, &with), &y, &t)?
        }
        DetourIota1 => {
            let intro = iota_intro(major);
            let Formula::Iota(x, f, g) = major.conclusion() else { unreachable!() };
            let v = eapp.eigen.clone().unwrap_or_else(|| x.clone());
            let vv = Term::Var(v.clone());
            let mut with = vec![(substitute(f, x, &vv), &intro.sigmas[0]), (substitute(g, x, &vv), &intro.sigmas[1])];
            if intro.free {
                with.push((Formula::exists(vv), &intro.sigmas[2]));
            }
            subst_deduction(&plug(&eps[1], eapp.label, &with), &v, &intro.t)?
        }
        DetourIota2 => {
            let intro = iota_intro(major);
            let Formula::Eq(t2, t3) = ec else { unreachable!() };
            let (ex2, ex3, f2, f3) = if intro.free {
                (Some(&eps[1]), Some(&eps[2]), &eps[3], &eps[4])
            } else {
                (None, None, &eps[1], &eps[2])
            };
            let to2 = intro.instance(t2, f2, ex2)?;
            let to3 = intro.instance(t3, f3, ex3)?;
            join_identities(&intro, t2, t3, to2, to3, ex3)
        }
        DetourIota2A => {
            let intro = iota_intro(major);
            let Some(Aux::Template { var, formula }) = &eapp.aux else { unreachable!("checked IotaE2A") };
            let (Formula::Exists(t2), Formula::Exists(t3)) = (eps[1].conclusion(), eps[2].conclusion()) else {
                unreachable!("checked IotaE2A")
            };
            let t1 = intro.t.clone();
            let to2 = intro.instance(t2, &eps[3], Some(&eps[1]))?;
            let to3 = intro.instance(t3, &eps[4], Some(&eps[2]))?;
            let a_at = |s: &Term| substitute(formula, var, s);
            let vacuous = !formula.has_free(var);
            if vacuous {
                eps[5].clone()
            } else if opts.iota2a_via_identity {
                let id = join_identities(&intro, t2, t3, to2, to3, Some(&eps[2]));
                if t2 == t3 {
                    eps[5].clone()
                } else {
                    leibniz(id, eps[5].clone(), var, formula, a_at(t3))
                }
            } else {
                let mut cur = eps[5].clone();
                if *t2 != t1 {
                    cur = leibniz(to2, cur, var, formula, a_at(&t1));
                }
                if *t3 != t1 {
                    cur = leibniz(to3, cur, var, formula, a_at(t3));
                }
                cur
            }
        }
    })
}

/// Final deduction and the steps taken.
pub fn normalize(d: &Deduction) -> (Deduction, Vec<Step>) {
    let opts = NormalizeOptions { max_steps: usize::MAX, ..NormalizeOptions::default() };
    normalize_with(d, &opts).expect("eigenvariables are owned after freshening")
}

pub fn normalize_with(d: &Deduction, opts: &NormalizeOptions) -> Result<(Deduction, Vec<Step>), NormalizeError> {
    let mut segs = find_maximal(d);
    if segs.is_empty() {
        return Ok((d.clone(), Vec::new()));
    }
    let mut cur = relabel(&freshen(d));
    let mut steps = Vec::new();
    while let Some(i) = select(&cur, &segs) {
        if steps.len() >= opts.max_steps {
            return Err(NormalizeError::StepLimit(steps.len()));
        }
        let before = rank_of(&segs);
        let kind = kind_of(&cur, &segs[i]);
        let path = segs[i].top().clone();
        let next = reduce_once_with(&cur, &segs[i], opts)?;
        cur = relabel(&freshen(&next));
        segs = find_maximal(&cur);
        steps.push(Step { kind, path, before, after: rank_of(&segs) });
    }
    Ok((cur, steps))
}

/// One parsed trace line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub step: usize,
    pub kind: ReductionKind,
    pub path: NodePath,
    pub before: Rank,
    pub after: Rank,
}

pub fn parse_trace_line(line: &str) -> Option<TraceLine> {
    let mut it = line.split_whitespace();
    let step = it.next()?.parse().ok()?;
    let kind = ReductionKind::parse(it.next()?)?;
    let path = crate::proof::parse_path(it.next()?)?;
    let (b, a) = it.next()?.split_once("->")?;
    if it.next().is_some() {
        return None;
    }
    let rank = |s: &str| -> Option<Rank> {
        let (d, l) = s.strip_prefix('<')?.strip_suffix('>')?.split_once(',')?;
        Some(Rank { d: d.parse().ok()?, l: l.parse().ok()? })
    };
    Some(TraceLine { step, kind, path, before: rank(b)?, after: rank(a)? })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error("line {0}: malformed trace line")]
    Malformed(usize),
    #[error("line {line}: {message}")]
    Mismatch { line: usize, message: String },
    #[error("trace ends but the deduction still has maximal segments, rank {0}")]
    Unfinished(Rank),
}

/// Replays a trace against a deduction, recomputing every rank; returns the
/// final deduction.
pub fn audit(d: &Deduction, trace: &str, opts: &NormalizeOptions) -> Result<Deduction, AuditError> {
    let lines: Vec<(usize, &str)> =
        trace.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    let mut cur = if lines.is_empty() { d.clone() } else { relabel(&freshen(d)) };
    for (expected, (no, text)) in lines.iter().enumerate() {
        let bad = |message: String| AuditError::Mismatch { line: *no, message };
        let t = parse_trace_line(text).ok_or(AuditError::Malformed(*no))?;
        if t.step != expected + 1 {
            return Err(bad(format!("step number {} out of sequence", t.step)));
        }
        let segs = find_maximal(&cur);
        let r = rank_of(&segs);
        if r != t.before {
            return Err(bad(format!("rank before is {r}, trace says {}", t.before)));
        }
        let Some(s) = segs.iter().find(|s| *s.top() == t.path) else {
            return Err(bad(format!("no maximal segment starts at {}", path_string(&t.path))));
        };
        let kind = kind_of(&cur, s);
        if kind != t.kind {
            return Err(bad(format!("segment at {} calls for {kind}, trace says {}", path_string(&t.path), t.kind)));
        }
        let next = reduce_once_with(&cur, s, opts).map_err(|e| bad(e.to_string()))?;
        cur = relabel(&freshen(&next));
        let after = rank(&cur);
        if after != t.after {
            return Err(bad(format!("rank after is {after}, trace says {}", t.after)));
        }
        if after >= t.before {
            return Err(bad(format!("rank {after} does not decrease from {}", t.before)));
        }
    }
    let segs = find_maximal(&cur);
    if !segs.is_empty() {
        return Err(AuditError::Unfinished(rank_of(&segs)));
    }
    Ok(cur)
}
