//! Seeded generator of checked deductions with detours and segments
//! planted at random places.

use iota_nd::calculus::{check, Mode};
use iota_nd::proof::{open_assumptions, open_assumptions_detailed, relabel, subst_deduction, Deduction, Label, Rule, RuleApp};
use iota_nd::syntax::{degree, Formula, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TERMS: [&str; 3] = ["a", "b", "c"];

pub struct Gen {
    rng: ChaCha8Rng,
    mode: Mode,
    label: Label,
    var: u32,
}

fn t(name: &str) -> Term {
    Term::var(name)
}

fn infer(rule: RuleApp, premises: Vec<Deduction>, c: Formula) -> Deduction {
    Deduction::infer(rule, premises, c)
}

fn r(rule: Rule) -> RuleApp {
    RuleApp::new(rule)
}

fn label_leaves(d: &Deduction, a: &Formula, l: Label) -> Deduction {
    match d {
        Deduction::Assumption { formula, label: None } if formula == a => Deduction::hyp(a.clone(), l),
        Deduction::Assumption { .. } => d.clone(),
        Deduction::Inference { rule, premises, conclusion } => {
            infer(rule.clone(), premises.iter().map(|p| label_leaves(p, a, l)).collect(), conclusion.clone())
        }
    }
}

fn unlabelled_atoms(d: &Deduction) -> Vec<Formula> {
    open_assumptions_detailed(d)
        .into_iter()
        .filter(|o| o.label.is_none() && o.formula.is_atomic())
        .map(|o| o.formula)
        .collect()
}

fn max_degree(d: &Deduction) -> usize {
    d.formulas().iter().map(|f| degree(f)).max().unwrap_or(0)
}

impl Gen {
    pub fn new(seed: u64, mode: Mode) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), mode, label: 1, var: 1 }
    }

    fn free(&self) -> bool {
        self.mode.is_free()
    }

    fn label(&mut self) -> Label {
        self.label += 1;
        self.label
    }

    fn fresh(&mut self) -> String {
        self.var += 1;
        format!("v{}", self.var)
    }

    fn term(&mut self) -> Term {
        t(TERMS[self.rng.gen_range(0..TERMS.len())])
    }

    fn pred(&mut self) -> &'static str {
        ["P", "Q"][self.rng.gen_range(0..2)]
    }

    fn atom(&mut self) -> Formula {
        match self.rng.gen_range(0..5) {
            0 => Formula::pred("R", vec![self.term(), self.term()]),
            n => {
                let p = if n % 2 == 0 { "P" } else { "Q" };
                Formula::pred(p, vec![self.term()])
            }
        }
    }

    fn exists(&self, t: &Term) -> Deduction {
        Deduction::assume(Formula::exists(t.clone()))
    }

    /// A proof of `z = t` from `F(z)` (and `E! z`) discharged with `l`.
    fn uniqueness(&mut self, f: &str, z: &str, tm: &Term, l: Label) -> Deduction {
        let zt = t(z);
        let all = Formula::all("y", Formula::imp(Formula::pred(f, vec![t("y")]), Formula::eq(t("y"), tm.clone())));
        let mut prem = vec![Deduction::assume(all)];
        if self.free() {
            prem.push(Deduction::hyp(Formula::exists(zt.clone()), l));
        }
        let inst = Formula::imp(Formula::pred(f, vec![zt.clone()]), Formula::eq(zt.clone(), tm.clone()));
        let ae = infer(r(Rule::AllE).witness(zt.clone()), prem, inst);
        infer(r(Rule::ImpE), vec![ae, Deduction::hyp(Formula::pred(f, vec![zt.clone()]), l)], Formula::eq(zt, tm.clone()))
    }

    /// IotaI concluding `the x [F(x), G(x)]` at term `tm`.
    fn iota_intro(&mut self, f: &str, g: &str, tm: &Term) -> Deduction {
        let z = self.fresh();
        let l = self.label();
        let mut prem = vec![
            Deduction::assume(Formula::pred(f, vec![tm.clone()])),
            Deduction::assume(Formula::pred(g, vec![tm.clone()])),
        ];
        if self.free() {
            prem.push(self.exists(tm));
        }
        prem.push(self.uniqueness(f, &z, tm, l));
        let iota = Formula::iota("x", Formula::pred(f, vec![t("x")]), Formula::pred(g, vec![t("x")]));
        infer(r(Rule::IotaI).eigen(z).label(l), prem, iota)
    }

    fn base(&mut self, depth: u32) -> Deduction {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return Deduction::assume(self.atom());
        }
        match self.rng.gen_range(0..8) {
            0 | 1 => {
                let (a, b) = (self.base(depth - 1), self.base(depth - 1));
                let c = Formula::and(a.conclusion().clone(), b.conclusion().clone());
                infer(r(Rule::AndI), vec![a, b], c)
            }
            2 => {
                let a = self.base(depth - 1);
                let other = self.atom();
                if self.rng.gen_bool(0.5) {
                    let c = Formula::or(a.conclusion().clone(), other);
                    infer(r(Rule::OrIL), vec![a], c)
                } else {
                    let c = Formula::or(other, a.conclusion().clone());
                    infer(r(Rule::OrIR), vec![a], c)
                }
            }
            3 | 4 => {
                let a = self.base(depth - 1);
                let opens: Vec<Formula> = unlabelled_atoms(&a);
                let c = a.conclusion().clone();
                if opens.is_empty() || self.rng.gen_bool(0.2) {
                    let ante = self.atom();
                    infer(r(Rule::ImpI), vec![a], Formula::imp(ante, c))
                } else {
                    let h = opens[self.rng.gen_range(0..opens.len())].clone();
                    let l = self.label();
                    infer(r(Rule::ImpI).label(l), vec![label_leaves(&a, &h, l)], Formula::imp(h, c))
                }
            }
            5 => {
                // IotaE2 (or IotaE2A) straight after IotaI
                let f = self.pred();
                let (t1, t2, t3) = (self.term(), self.term(), self.term());
                let intro = self.iota_intro(f, "Q", &t1);
                let mut prem = vec![intro];
                if self.free() {
                    prem.push(self.exists(&t2));
                    prem.push(self.exists(&t3));
                }
                prem.push(Deduction::assume(Formula::pred(f, vec![t2.clone()])));
                prem.push(Deduction::assume(Formula::pred(f, vec![t3.clone()])));
                if self.mode == Mode::InfPrime {
                    let tmpl = Formula::pred("R", vec![t("w"), t1.clone()]);
                    prem.push(Deduction::assume(Formula::pred("R", vec![t2, t1.clone()])));
                    infer(r(Rule::IotaE2A).template("w", tmpl), prem, Formula::pred("R", vec![t3, t1]))
                } else {
                    infer(r(Rule::IotaE2), prem, Formula::eq(t2, t3))
                }
            }
            6 if self.mode == Mode::InfPrime => {
                // an identity from IotaE2A used by Leibniz's law
                let f = self.pred();
                let (t1, t2) = (t("a"), t("b"));
                let iota = Formula::iota("x", Formula::pred(f, vec![t("x")]), Formula::pred("Q", vec![t("x")]));
                let refl = infer(r(Rule::EqIn), vec![self.exists(&t1)], Formula::eq(t1.clone(), t1.clone()));
                let prem = vec![
                    Deduction::assume(iota),
                    self.exists(&t1),
                    self.exists(&t2),
                    Deduction::assume(Formula::pred(f, vec![t1.clone()])),
                    Deduction::assume(Formula::pred(f, vec![t2.clone()])),
                    refl,
                ];
                let id = infer(
                    r(Rule::IotaE2A).template("w", Formula::eq(t1.clone(), t("w"))),
                    prem,
                    Formula::eq(t1.clone(), t2.clone()),
                );
                let p = self.pred();
                infer(
                    r(Rule::EqE).template("w", Formula::pred(p, vec![t("w")])),
                    vec![id, Deduction::assume(Formula::pred(p, vec![t1]))],
                    Formula::pred(p, vec![t2]),
                )
            }
            _ => {
                let a = self.base(depth - 1);
                let (p, q) = (a.conclusion().clone(), self.atom());
                let c = Formula::and(p.clone(), q);
                let pair = infer(r(Rule::AndI), vec![a, Deduction::assume(c_right(&c))], c);
                infer(r(Rule::AndEL), vec![pair], p)
            }
        }
    }

    /// A deduction of the same conclusion as `s` with a detour or a segment
    /// former planted directly below it.
    fn plant(&mut self, s: Deduction) -> Deduction {
        let c = s.conclusion().clone();
        let free = self.free();
        match self.rng.gen_range(0..10) {
            0 => {
                let e = self.base(1);
                let pair = Formula::and(c.clone(), e.conclusion().clone());
                infer(r(Rule::AndEL), vec![infer(r(Rule::AndI), vec![s, e], pair)], c)
            }
            1 => {
                let e = self.base(1);
                let pair = Formula::and(e.conclusion().clone(), c.clone());
                infer(r(Rule::AndER), vec![infer(r(Rule::AndI), vec![e, s], pair)], c)
            }
            2 => {
                let opens: Vec<Formula> = unlabelled_atoms(&s);
                if opens.is_empty() {
                    let a = self.atom();
                    let imp = infer(r(Rule::ImpI), vec![s], Formula::imp(a.clone(), c.clone()));
                    infer(r(Rule::ImpE), vec![imp, Deduction::assume(a)], c)
                } else {
                    let a = opens[self.rng.gen_range(0..opens.len())].clone();
                    let l = self.label();
                    let imp = infer(r(Rule::ImpI).label(l), vec![label_leaves(&s, &a, l)], Formula::imp(a.clone(), c.clone()));
                    let arg = if self.rng.gen_bool(0.5) {
                        Deduction::assume(a)
                    } else {
                        let b = self.atom();
                        let ab = Formula::and(a.clone(), b.clone());
                        let pair = infer(r(Rule::AndI), vec![Deduction::assume(a.clone()), Deduction::assume(b)], ab);
                        infer(r(Rule::AndEL), vec![pair], a)
                    };
                    infer(r(Rule::ImpE), vec![imp, arg], c)
                }
            }
            3 => {
                let opens: Vec<Formula> = unlabelled_atoms(&s);
                let other = self.atom();
                if let Some(a) = opens.first().cloned() {
                    let l = self.label();
                    let disj = Formula::or(a.clone(), other);
                    let major = infer(r(Rule::OrIL), vec![Deduction::assume(a.clone())], disj);
                    let left = label_leaves(&s, &a, l);
                    infer(r(Rule::OrE).label(l), vec![major, left, s], c)
                } else {
                    let a = self.atom();
                    let disj = Formula::or(a.clone(), other);
                    let major = infer(r(Rule::OrIL), vec![Deduction::assume(a)], disj);
                    infer(r(Rule::OrE), vec![major, s.clone(), s], c)
                }
            }
            4 => {
                let v = self.fresh();
                let tm = self.term();
                let generalisable = c.has_free(tm_name(&tm))
                    && !open_assumptions(&s).iter().any(|f| f.has_free(tm_name(&tm)));
                let (body, inner) = if generalisable {
                    let body = subst_deduction(&s, tm_name(&tm), &t(&v)).expect("no eigenvariable named a, b or c");
                    let inner = body.conclusion().clone();
                    (body, inner)
                } else {
                    (s, c.clone())
                };
                let all = Formula::all(v.clone(), inner);
                let intro = infer(r(Rule::AllI).eigen(v), vec![body], all);
                let mut prem = vec![intro];
                if free {
                    prem.push(self.exists(&tm));
                }
                infer(r(Rule::AllE).witness(tm), prem, c)
            }
            5 => {
                let v = self.fresh();
                let tm = self.term();
                let p = self.pred();
                let mut prem = vec![Deduction::assume(Formula::pred(p, vec![tm.clone()]))];
                if free {
                    prem.push(self.exists(&tm));
                }
                let ex = Formula::ex(v.clone(), Formula::pred(p, vec![t(&v)]));
                let major = infer(r(Rule::ExI).witness(tm), prem, ex);
                infer(r(Rule::ExE).eigen(self.fresh()), vec![major, s], c)
            }
            6 => {
                let f = self.pred();
                let tm = self.term();
                let intro = self.iota_intro(f, "Q", &tm);
                infer(r(Rule::IotaE1).eigen(self.fresh()), vec![intro, s], c)
            }
            7 => {
                let disj = Formula::or(Formula::pred("P", vec![t("a")]), Formula::pred("Q", vec![t("b")]));
                infer(r(Rule::OrE), vec![Deduction::assume(disj), s.clone(), s], c)
            }
            8 => {
                let v = self.fresh();
                let ex = Formula::ex(v.clone(), Formula::pred("P", vec![t(&v)]));
                infer(r(Rule::ExE).eigen(self.fresh()), vec![Deduction::assume(ex), s], c)
            }
            _ => {
                let iota = Formula::iota("x", Formula::pred("P", vec![t("x")]), Formula::pred("Q", vec![t("x")]));
                infer(r(Rule::IotaE1).eigen(self.fresh()), vec![Deduction::assume(iota), s], c)
            }
        }
    }

    /// One candidate: a base proof with 1 to 4 planted detours or segment
    /// formers. Not necessarily within the bounds.
    pub fn candidate(&mut self) -> Deduction {
        let depth = self.rng.gen_range(1..4);
        let mut d = self.base(depth);
        for _ in 0..self.rng.gen_range(1..5) {
            let mut paths = Vec::new();
            d.walk(&mut |p, _| paths.push(p.clone()));
            let p = paths[self.rng.gen_range(0..paths.len())].clone();
            let slot = d.at_mut(&p).unwrap();
            let sub = std::mem::replace(slot, Deduction::assume(Formula::Bottom));
            *slot = self.plant(sub);
        }
        relabel(&d)
    }

    /// A checked deduction with formula degree at most `max_degree` and tree
    /// depth at most `max_depth`; the number of rejected candidates is
    /// returned alongside.
    pub fn checked(&mut self, max_degree_: usize, max_depth: usize) -> (Deduction, usize) {
        for rejected in 0.. {
            let d = self.candidate();
            if d.depth() <= max_depth && max_degree(&d) <= max_degree_ && check(&d, self.mode).is_empty() {
                return (d, rejected);
            }
        }
        unreachable!()
    }
}

fn tm_name(t: &Term) -> &str {
    match t {
        Term::Var(x) => x,
        _ => unreachable!("generator terms are variables"),
    }
}

fn c_right(c: &Formula) -> Formula {
    match c {
        Formula::And(_, b) => (**b).clone(),
        _ => unreachable!(),
    }
}
