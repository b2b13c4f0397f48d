//! Expansion of the derived rules BottomE_gen and EqE_gen into kernel rules,
//! and translation between IotaE2 and IotaE2A.

use crate::calculus::{check, Mode};
use crate::proof::{open_assumptions, relabel, Aux, Deduction, Label, Rule, RuleApp};
use crate::syntax::{alpha_eq, fresh_var, is_free_for, substitute, Formula, Ident, Term, VarSet};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElabError {
    #[error("input does not check in {mode}: {detail}")]
    ModeMismatch { mode: Mode, detail: String },
    #[error("`{term}` is not free for `{var}` in `{formula}`")]
    NotFreeFor { term: Term, var: Ident, formula: Formula },
    #[error("{0}")]
    BadInput(String),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ElabError> {
    Err(ElabError::BadInput(msg.into()))
}

fn require_checks(d: &Deduction, mode: Mode) -> Result<(), ElabError> {
    match check(d, mode).into_iter().next() {
        None => Ok(()),
        Some(e) => Err(ElabError::ModeMismatch { mode, detail: e.to_string() }),
    }
}

fn max_label(d: &Deduction) -> Label {
    let mut m = d.labels_in_use().into_iter().max().unwrap_or(0);
    d.walk(&mut |_, n| {
        if let Deduction::Assumption { label: Some(l), .. } = n {
            m = m.max(*l);
        }
    });
    m
}

fn open_vars(d: &Deduction) -> VarSet {
    open_assumptions(d).iter().flat_map(|f| f.free_vars()).collect()
}

/// `goal` from a deduction of `_|_`, with BottomE at atomic conclusions only.
pub fn expand_general_efq(goal: &Formula, bot_proof: &Deduction, mode: Mode) -> Result<Deduction, ElabError> {
    if *bot_proof.conclusion() != Formula::Bottom {
        return bad(format!("`{}` is not `_|_`", bot_proof.conclusion()));
    }
    require_checks(bot_proof, mode)?;
    Ok(relabel(&efq(goal, bot_proof, mode.is_free())))
}

fn efq(goal: &Formula, bot: &Deduction, free: bool) -> Deduction {
    let bottom_e = |c: Formula| Deduction::infer(RuleApp::new(Rule::BottomE), vec![bot.clone()], c);
    let opens = open_vars(bot);
    match goal {
        Formula::Bottom => bot.clone(),
        a if a.is_atomic() => bottom_e(a.clone()),
        // the propositional cases decompose the goal in the usual way
        Formula::And(a, b) => {
            Deduction::infer(RuleApp::new(Rule::AndI), vec![efq(a, bot, free), efq(b, bot, free)], goal.clone())
        }
        Formula::Or(a, _) => Deduction::infer(RuleApp::new(Rule::OrIL), vec![efq(a, bot, free)], goal.clone()),
        Formula::Imp(_, b) => Deduction::infer(RuleApp::new(Rule::ImpI), vec![efq(b, bot, free)], goal.clone()),
        Formula::All(x, a) => {
            let y = if opens.contains(x) {
                let mut avoid = bot.all_vars();
                avoid.extend(goal.all_vars());
                fresh_var(x, &avoid)
            } else {
                x.clone()
            };
            let inst = substitute(a, x, &Term::Var(y.clone()));
            Deduction::infer(RuleApp::new(Rule::AllI).eigen(y), vec![efq(&inst, bot, free)], goal.clone())
        }
        Formula::Ex(x, a) => {
            let t = Term::Var(x.clone());
            let mut premises = vec![efq(a, bot, free)];
            if free {
                premises.push(bottom_e(Formula::exists(t.clone())));
            }
            Deduction::infer(RuleApp::new(Rule::ExI).witness(t), premises, goal.clone())
        }
        Formula::Iota(x, f, g) => {
            let t = Term::Var(x.clone());
            let mut avoid = bot.all_vars();
            avoid.extend(goal.all_vars());
            avoid.insert(x.clone());
            let z = fresh_var("z", &avoid);
            let mut premises = vec![efq(f, bot, free), efq(g, bot, free)];
            if free {
                premises.push(bottom_e(Formula::exists(t.clone())));
            }
            premises.push(bottom_e(Formula::eq(Term::Var(z.clone()), t)));
            Deduction::infer(RuleApp::new(Rule::IotaI).eigen(z), premises, goal.clone())
        }
        _ => unreachable!("atomic formulas handled above"),
    }
}

/// `a[t2/x]` from a deduction of `t1 = t2` and one of `a[t1/x]`, with
/// Leibniz's law applied to atomic formulas only.
pub fn expand_general_eq_e(
    eq_proof: &Deduction,
    a: &Formula,
    x: &str,
    body_proof: &Deduction,
    mode: Mode,
) -> Result<Deduction, ElabError> {
    let Formula::Eq(t1, t2) = eq_proof.conclusion() else {
        return bad(format!("`{}` is not an identity", eq_proof.conclusion()));
    };
    for t in [t1, t2] {
        if !is_free_for(t, x, a) {
            return Err(ElabError::NotFreeFor { term: t.clone(), var: x.to_string(), formula: a.clone() });
        }
    }
    let want = substitute(a, x, t1);
    if !alpha_eq(body_proof.conclusion(), &want) {
        return bad(format!("body concludes `{}`, expected `{want}`", body_proof.conclusion()));
    }
    require_checks(eq_proof, mode)?;
    require_checks(body_proof, mode)?;
    let mut next = max_label(eq_proof).max(max_label(body_proof)) + 1;
    let mut cx = Leibniz { eq: eq_proof, s1: t1, s2: t2, free: mode.is_free(), prime: mode == Mode::InfPrime, next: &mut next };
    Ok(relabel(&cx.expand(a, x, body_proof, true)))
}

struct Leibniz<'a> {
    eq: &'a Deduction,
    s1: &'a Term,
    s2: &'a Term,
    free: bool,
    // inf-prime has no IotaE2
    prime: bool,
    next: &'a mut Label,
}

impl Leibniz<'_> {
    fn label(&mut self) -> Label {
        let l = *self.next;
        *self.next += 1;
        l
    }

    fn ends(&self, forward: bool) -> (&Term, &Term) {
        if forward {
            (self.s1, self.s2)
        } else {
            (self.s2, self.s1)
        }
    }

    fn fresh(&self, base: &str, a: &Formula, body: &Deduction, extra: &[&str]) -> Ident {
        let mut avoid = a.all_vars();
        avoid.extend(self.s1.free_vars());
        avoid.extend(self.s2.free_vars());
        avoid.extend(self.eq.all_vars());
        avoid.extend(body.all_vars());
        avoid.extend(extra.iter().map(|s| s.to_string()));
        fresh_var(base, &avoid)
    }

    /// `a[dst/x]` from `body`, a deduction of `a[src/x]`; `forward` runs
    /// from the left term of the identity to the right.
    fn expand(&mut self, a: &Formula, x: &str, body: &Deduction, forward: bool) -> Deduction {
        let (src, dst) = self.ends(forward);
        let (src, dst) = (src.clone(), dst.clone());
        if !a.has_free(x) || src == dst {
            return body.clone();
        }
        let goal = substitute(a, x, &dst);
        let at = |f: &Formula, t: &Term| substitute(f, x, t);
        match a {
            _ if a.is_atomic() => Deduction::infer(
                RuleApp::new(Rule::EqE).template(x, a.clone()),
                vec![self.eq.clone(), body.clone()],
                goal,
            ),
            // connective cases follow the usual induction on the template
            Formula::And(b, c) => {
                let left = Deduction::infer(RuleApp::new(Rule::AndEL), vec![body.clone()], at(b, &src));
                let right = Deduction::infer(RuleApp::new(Rule::AndER), vec![body.clone()], at(c, &src));
                let left = self.expand(b, x, &left, forward);
                let right = self.expand(c, x, &right, forward);
                Deduction::infer(RuleApp::new(Rule::AndI), vec![left, right], goal)
            }
            Formula::Or(b, c) => {
                let l = self.label();
                let lb = self.expand(b, x, &Deduction::hyp(at(b, &src), l), forward);
                let rc = self.expand(c, x, &Deduction::hyp(at(c, &src), l), forward);
                let lb = Deduction::infer(RuleApp::new(Rule::OrIL), vec![lb], goal.clone());
                let rc = Deduction::infer(RuleApp::new(Rule::OrIR), vec![rc], goal.clone());
                Deduction::infer(RuleApp::new(Rule::OrE).label(l), vec![body.clone(), lb, rc], goal)
            }
            Formula::Imp(b, c) => {
                let l = self.label();
                let back = self.expand(b, x, &Deduction::hyp(at(b, &dst), l), !forward);
                let mp = Deduction::infer(RuleApp::new(Rule::ImpE), vec![body.clone(), back], at(c, &src));
                let there = self.expand(c, x, &mp, forward);
                Deduction::infer(RuleApp::new(Rule::ImpI).label(l), vec![there], goal)
            }
            Formula::All(y, b) => {
                let v = self.fresh(y, a, body, &[x]);
                let vv = Term::Var(v.clone());
                let bv = substitute(b, y, &vv);
                let l = self.label();
                let mut premises = vec![body.clone()];
                if self.free {
                    premises.push(Deduction::hyp(Formula::exists(vv.clone()), l));
                }
                let inst = Deduction::infer(RuleApp::new(Rule::AllE).witness(vv), premises, at(&bv, &src));
                let moved = self.expand(&bv, x, &inst, forward);
                let app = RuleApp::new(Rule::AllI).eigen(v);
                let app = if self.free { app.label(l) } else { app };
                Deduction::infer(app, vec![moved], goal)
            }
            Formula::Ex(y, b) => {
                let v = self.fresh(y, a, body, &[x]);
                let vv = Term::Var(v.clone());
                let bv = substitute(b, y, &vv);
                let l = self.label();
                let moved = self.expand(&bv, x, &Deduction::hyp(at(&bv, &src), l), forward);
                let mut premises = vec![moved];
                if self.free {
                    premises.push(Deduction::hyp(Formula::exists(vv.clone()), l));
                }
                let exi = Deduction::infer(RuleApp::new(Rule::ExI).witness(vv), premises, goal.clone());
                Deduction::infer(RuleApp::new(Rule::ExE).eigen(v).label(l), vec![body.clone(), exi], goal)
            }
            Formula::Iota(y, f, g) => self.iota(a, x, y, f, g, body, forward),
            _ => unreachable!("atomic formulas handled above"),
        }
    }

    /// Explicit induction step for descriptions: IotaE1 over IotaI, with an
    /// IotaE2 inside proving the new description unique.
    #[allow(clippy::too_many_arguments)]
    fn iota(&mut self, a: &Formula, x: &str, y: &str, f: &Formula, g: &Formula, body: &Deduction, forward: bool) -> Deduction {
        let (src, dst) = self.ends(forward);
        let (src, dst) = (src.clone(), dst.clone());
        // bound variable kept apart from the terms so substitution leaves it alone
        let (y, f, g) = if src.contains_var(y) || dst.contains_var(y) {
            let y2 = self.fresh(y, a, body, &[x]);
            let yv = Term::Var(y2.clone());
            (y2, substitute(f, y, &yv), substitute(g, y, &yv))
        } else {
            (y.to_string(), f.clone(), g.clone())
        };
        let z = self.fresh("z", a, body, &[x, &y]);
        let v = self.fresh("v", a, body, &[x, &y, &z]);
        let (zt, vt) = (Term::Var(z.clone()), Term::Var(v.clone()));
        let (f_src, g_src) = (substitute(&f, x, &src), substitute(&g, x, &src));
        let (f_dst, g_dst) = (substitute(&f, x, &dst), substitute(&g, x, &dst));
        let goal = Formula::iota(y.clone(), f_dst.clone(), g_dst.clone());
        let (outer, inner) = (self.label(), self.label());
        let over = |h: &Formula, t: &Term| substitute(h, &y, t);

        // F and G at z carried from the old description to the new one
        let fz = self.expand(&over(&f, &zt), x, &Deduction::hyp(over(&f_src, &zt), outer), forward);
        let gz = self.expand(&over(&g, &zt), x, &Deduction::hyp(over(&g_src, &zt), outer), forward);
        // uniqueness: the assumed new F_v taken back to the old one
        let fv_old = self.expand(&over(&f, &vt), x, &Deduction::hyp(over(&f_dst, &vt), inner), !forward);
        let mut e2 = vec![body.clone()];
        if self.free {
            e2.push(Deduction::hyp(Formula::exists(vt.clone()), inner));
            e2.push(Deduction::hyp(Formula::exists(zt.clone()), outer));
        }
        e2.push(fv_old);
        e2.push(Deduction::hyp(over(&f_src, &zt), outer));
        let unique = if self.prime {
            iota_e2_from_2a(&e2).expect("five premises with existence formulas")
        } else {
            Deduction::infer(RuleApp::new(Rule::IotaE2), e2, Formula::eq(vt, zt.clone()))
        };
        let mut ii = vec![fz, gz];
        if self.free {
            ii.push(Deduction::hyp(Formula::exists(zt), outer));
        }
        ii.push(unique);
        let intro = Deduction::infer(RuleApp::new(Rule::IotaI).eigen(v).label(inner), ii, goal.clone());
        Deduction::infer(RuleApp::new(Rule::IotaE1).eigen(z).label(outer), vec![body.clone(), intro], goal)
    }
}

/// IotaE2A from IotaE2 and Leibniz's law: `premises` are the description,
/// `E! t1`, `E! t2`, `F_t1`, `F_t2` and `A_t1`.
pub fn iota_e2a_from_2(premises: &[Deduction], var: &str, template: &Formula) -> Result<Deduction, ElabError> {
    let mut next = premises.iter().map(max_label).max().unwrap_or(0) + 1;
    iota2a_via_2(premises, var, template, true, &mut next)
}

fn iota2a_via_2(premises: &[Deduction], var: &str, template: &Formula, free: bool, next: &mut Label) -> Result<Deduction, ElabError> {
    let [iota, e1, e2, f1, f2, a1] = premises else {
        return bad(format!("expected 6 premises, found {}", premises.len()));
    };
    let (Formula::Exists(t1), Formula::Exists(t2)) = (e1.conclusion(), e2.conclusion()) else {
        return bad("premises 2 and 3 must be existence formulas");
    };
    if !alpha_eq(a1.conclusion(), &substitute(template, var, t1)) {
        return bad(format!("`{}` is not the template at `{t1}`", a1.conclusion()));
    }
    let id = Deduction::infer(
        RuleApp::new(Rule::IotaE2),
        vec![iota.clone(), e1.clone(), e2.clone(), f1.clone(), f2.clone()],
        Formula::eq(t1.clone(), t2.clone()),
    );
    let mut cx = Leibniz { eq: &id, s1: t1, s2: t2, free, prime: false, next };
    Ok(cx.expand(template, var, a1, true))
}

/// IotaE2 from IotaE2A with the template `t1 = w`: `premises` are the
/// description, `E! t1`, `E! t2`, `F_t1` and `F_t2`.
pub fn iota_e2_from_2a(premises: &[Deduction]) -> Result<Deduction, ElabError> {
    let [iota, e1, e2, f1, f2] = premises else {
        return bad(format!("expected 5 premises, found {}", premises.len()));
    };
    let (Formula::Exists(t1), Formula::Exists(t2)) = (e1.conclusion(), e2.conclusion()) else {
        return bad("premises 2 and 3 must be existence formulas");
    };
    let w = fresh_var("w", &t1.free_vars());
    let refl = Deduction::infer(RuleApp::new(Rule::EqIn), vec![e1.clone()], Formula::eq(t1.clone(), t1.clone()));
    Ok(Deduction::infer(
        RuleApp::new(Rule::IotaE2A).template(w.clone(), Formula::eq(t1.clone(), Term::Var(w))),
        vec![iota.clone(), e1.clone(), e2.clone(), f1.clone(), f2.clone(), refl],
        Formula::eq(t1.clone(), t2.clone()),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expand {
    Efq,
    EqE,
}

/// Replaces every BottomE_gen (or EqE_gen) node by its kernel expansion.
/// The input must check in `mode` with derived rules allowed.
pub fn expand_derived(d: &Deduction, which: Expand, mode: Mode) -> Result<Deduction, ElabError> {
    let opts = crate::calculus::CheckOptions { allow_derived: true };
    if let Some(e) = crate::calculus::check_with(d, mode, opts).into_iter().next() {
        return Err(ElabError::ModeMismatch { mode, detail: e.to_string() });
    }
    let mut next = max_label(d) + 1;
    Ok(relabel(&expand_nodes(d, which, mode, &mut next)))
}

fn expand_nodes(d: &Deduction, which: Expand, mode: Mode, next: &mut Label) -> Deduction {
    let (free, prime) = (mode.is_free(), mode == Mode::InfPrime);
    let Deduction::Inference { rule, premises, conclusion } = d else {
        return d.clone();
    };
    let premises: Vec<Deduction> = premises.iter().map(|p| expand_nodes(p, which, mode, next)).collect();
    match (rule.rule, which) {
        (Rule::BottomEGen, Expand::Efq) => efq(conclusion, &premises[0], free),
        (Rule::EqEGen, Expand::EqE) => {
            let Some(Aux::Template { var, formula }) = &rule.aux else { unreachable!("checked EqE_gen") };
            let Formula::Eq(s1, s2) = premises[0].conclusion() else { unreachable!("checked EqE_gen") };
            let forward = alpha_eq(premises[1].conclusion(), &substitute(formula, var, s1));
            let mut cx = Leibniz { eq: &premises[0], s1, s2, free, prime, next };
            let out = cx.expand(formula, var, &premises[1], forward);
            // keep the conclusion exactly as written
            match out {
                Deduction::Inference { rule, premises, .. } => Deduction::infer(rule, premises, conclusion.clone()),
                leaf => leaf,
            }
        }
        _ => Deduction::infer(rule.clone(), premises, conclusion.clone()),
    }
}

/// Rewrites a proof between `inf` and `inf-prime` by replacing each IotaE2
/// (resp. IotaE2A) with its derivation from the other rule.
pub fn translate(d: &Deduction, from: Mode, to: Mode) -> Result<Deduction, ElabError> {
    require_checks(d, from)?;
    let out = match (from, to) {
        (a, b) if a == b => return Ok(d.clone()),
        (Mode::Inf, Mode::InfPrime) => trans(d, Rule::IotaE2, &mut 0)?,
        (Mode::InfPrime, Mode::Inf) => {
            let mut next = max_label(d) + 1;
            trans(d, Rule::IotaE2A, &mut next)?
        }
        _ => {
            return Err(ElabError::ModeMismatch {
                mode: to,
                detail: format!("no translation from {from} to {to}"),
            })
        }
    };
    Ok(relabel(&out))
}

fn trans(d: &Deduction, target: Rule, next: &mut Label) -> Result<Deduction, ElabError> {
    let Deduction::Inference { rule, premises, conclusion } = d else {
        return Ok(d.clone());
    };
    let premises = premises.iter().map(|p| trans(p, target, next)).collect::<Result<Vec<_>, _>>()?;
    if rule.rule != target {
        return Ok(Deduction::infer(rule.clone(), premises, conclusion.clone()));
    }
    let out = if target == Rule::IotaE2 {
        iota_e2_from_2a(&premises)?
    } else {
        let Some(Aux::Template { var, formula }) = &rule.aux else { unreachable!("checked IotaE2A") };
        iota2a_via_2(&premises, var, formula, true, next)?
    };
    Ok(match out {
        Deduction::Inference { rule, premises, .. } => Deduction::infer(rule, premises, conclusion.clone()),
        leaf => leaf,
    })
}
