//! Brute-force provability oracle used to cross-check the general =E
//! expansion. It searches backwards for a deduction in which Leibniz's law
//! is applied to atomic formulas only, with a bound on the depth of the
//! search tree. It shares nothing with the elaborator beyond substitution.

use std::cell::RefCell;
use std::rc::Rc;
use std::collections::{BTreeMap, HashMap};

use iota_nd::syntax::{substitute, Formula, Term};

/// All formulas of degree at most `max` over the unary predicates F and G,
/// with atoms taken over `x` and the single binder name `y`.
pub fn enumerate(max: usize) -> Vec<Formula> {
    let atoms: Vec<Formula> = ["F", "G"]
        .iter()
        .flat_map(|p| ["x", "y"].iter().map(move |v| Formula::pred(*p, vec![Term::var(*v)])))
        .collect();
    let mut levels: Vec<Vec<Formula>> = vec![atoms];
    for d in 1..=max {
        let mut out = Vec::new();
        for i in 0..d {
            let j = d - 1 - i;
            for a in &levels[i] {
                for b in &levels[j] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                    out.push(Formula::imp(a.clone(), b.clone()));
                    out.push(Formula::iota("y", a.clone(), b.clone()));
                }
            }
        }
        for a in &levels[d - 1] {
            out.push(Formula::all("y", a.clone()));
            out.push(Formula::ex("y", a.clone()));
        }
        levels.push(out);
    }
    levels.into_iter().flatten().collect()
}

fn first_pred(f: &Formula) -> Option<&str> {
    match f {
        Formula::Pred(p, _) => Some(p),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iota(_, a, b) => {
            first_pred(a).or_else(|| first_pred(b))
        }
        Formula::All(_, a) | Formula::Ex(_, a) => first_pred(a),
        _ => None,
    }
}

/// The enumerated formulas in which `x` is free, one from each pair related
/// by exchanging F and G (the problems are isomorphic under renaming).
pub fn cases(max: usize) -> Vec<Formula> {
    enumerate(max).into_iter().filter(|f| f.has_free("x") && first_pred(f) == Some("F")).collect()
}

#[derive(Clone, Default)]
struct Ctx {
    fs: Vec<Rc<Formula>>,
    /// Descriptions already opened by the first elimination rule, kept for
    /// the second.
    iotas: Vec<Rc<Formula>>,
}

impl Ctx {
    fn with(&self, f: Formula) -> Ctx {
        let mut c = self.clone();
        if !c.has(&f) {
            c.fs.push(Rc::new(f));
        }
        c
    }

    fn has(&self, f: &Formula) -> bool {
        self.fs.iter().any(|g| **g == *f)
    }

    fn without(&self, i: usize) -> Ctx {
        let mut c = self.clone();
        c.fs.remove(i);
        c
    }
}

type Key = (Vec<Rc<Formula>>, Vec<Rc<Formula>>, Formula);

pub struct Oracle {
    free: bool,
    /// Largest depth at which a state was refuted; `u32::MAX` marks a
    /// proved state.
    seen: RefCell<HashMap<Key, u32>>,
}

struct Classes {
    ids: BTreeMap<Term, usize>,
    parent: Vec<usize>,
}

impl Classes {
    fn id(&mut self, t: &Term) -> usize {
        if let Some(i) = self.ids.get(t) {
            return *i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.ids.insert(t.clone(), i);
        i
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn same(&mut self, a: &Term, b: &Term) -> bool {
        let (a, b) = (self.id(a), self.id(b));
        self.root(a) == self.root(b)
    }
}

impl Oracle {
    pub fn new(free: bool) -> Oracle {
        Oracle { free, seen: RefCell::new(HashMap::new()) }
    }

    /// The first `oN` not free in the state, so that equal states get equal
    /// names and the memo recognises them.
    fn fresh_for(&self, ctx: &Ctx, goal: &Formula) -> Term {
        let used = self.terms(ctx, goal);
        (1..).map(|n| Term::var(format!("o{n}"))).find(|t| !used.contains(t)).unwrap()
    }

    pub fn states(&self) -> usize {
        self.seen.borrow().len()
    }

    /// Iterative deepening up to `depth`.
    pub fn provable(&self, assumptions: &[Formula], goal: &Formula, depth: u32) -> bool {
        let ctx = Ctx { fs: assumptions.iter().cloned().map(Rc::new).collect(), iotas: Vec::new() };
        (1..=depth).any(|d| self.prove(&ctx, goal, d))
    }

    fn classes(&self, ctx: &Ctx) -> Classes {
        let mut c = Classes { ids: BTreeMap::new(), parent: Vec::new() };
        for f in &ctx.fs {
            if let Formula::Eq(s, t) = &**f {
                let (a, b) = (c.id(s), c.id(t));
                let (ra, rb) = (c.root(a), c.root(b));
                c.parent[ra] = rb;
            }
        }
        c
    }

    fn denotes(&self, ctx: &Ctx, cl: &mut Classes, t: &Term) -> bool {
        if !self.free {
            return true;
        }
        ctx.fs.iter().any(|f| match &**f {
            Formula::Exists(s) => cl.same(s, t),
            Formula::Pred(_, args) => args.iter().any(|s| cl.same(s, t)),
            Formula::Eq(a, b) => cl.same(a, t) || cl.same(b, t),
            _ => false,
        })
    }

    fn atomic(&self, ctx: &Ctx, goal: &Formula) -> bool {
        let mut cl = self.classes(ctx);
        match goal {
            Formula::Pred(p, args) => ctx.fs.iter().any(|f| match &**f {
                Formula::Pred(q, brgs) => {
                    p == q && args.len() == brgs.len() && args.iter().zip(brgs).all(|(a, b)| cl.same(a, b))
                }
                _ => false,
            }),
            Formula::Eq(s, t) if s == t => self.denotes(ctx, &mut cl, s),
            Formula::Eq(s, t) => cl.same(s, t),
            Formula::Exists(t) => self.denotes(ctx, &mut cl, t),
            _ => false,
        }
    }

    fn terms(&self, ctx: &Ctx, goal: &Formula) -> Vec<Term> {
        let mut vs = goal.free_vars();
        for f in ctx.fs.iter().chain(&ctx.iotas) {
            vs.extend(f.free_vars());
        }
        vs.into_iter().rev().map(Term::var).collect()
    }

    fn exists_atom(&self, t: &Term) -> Option<Formula> {
        self.free.then(|| Formula::exists(t.clone()))
    }

    fn prove(&self, ctx: &Ctx, goal: &Formula, depth: u32) -> bool {
        if depth == 0 {
            return false;
        }
        let mut fs = ctx.fs.clone();
        fs.sort();
        let key = (fs, ctx.iotas.clone(), goal.clone());
        if let Some(&d) = self.seen.borrow().get(&key) {
            if d == u32::MAX {
                return true;
            }
            if d >= depth {
                return false;
            }
        }
        let ok = self.search(ctx, goal, depth);
        self.seen.borrow_mut().insert(key, if ok { u32::MAX } else { depth });
        ok
    }

    fn search(&self, ctx: &Ctx, goal: &Formula, depth: u32) -> bool {
        let d = depth - 1;
        if ctx.has(&Formula::Bottom) || (goal.is_atomic() && self.atomic(ctx, goal)) {
            return true;
        }
        // invertible rules on the right
        match goal {
            Formula::And(a, b) => return self.prove(ctx, a, d) && self.prove(ctx, b, d),
            Formula::Imp(a, b) => return self.prove(&ctx.with((**a).clone()), b, d),
            Formula::All(y, b) => {
                let v = self.fresh_for(ctx, goal);
                let c = match self.exists_atom(&v) {
                    Some(e) => ctx.with(e),
                    None => ctx.clone(),
                };
                return self.prove(&c, &substitute(b, y, &v), d);
            }
            _ => {}
        }
        // invertible rules on the left
        for (i, f) in ctx.fs.iter().enumerate() {
            match &**f {
                Formula::And(a, b) => {
                    return self.prove(&ctx.without(i).with((**a).clone()).with((**b).clone()), goal, d)
                }
                Formula::Or(a, b) => {
                    let rest = ctx.without(i);
                    return self.prove(&rest.with((**a).clone()), goal, d)
                        && self.prove(&rest.with((**b).clone()), goal, d);
                }
                Formula::Ex(y, b) => {
                    let v = self.fresh_for(ctx, goal);
                    let mut c = ctx.without(i).with(substitute(b, y, &v));
                    if let Some(e) = self.exists_atom(&v) {
                        c = c.with(e);
                    }
                    return self.prove(&c, goal, d);
                }
                Formula::Iota(y, fy, gy) => {
                    let v = self.fresh_for(ctx, goal);
                    let mut c = ctx.without(i).with(substitute(fy, y, &v)).with(substitute(gy, y, &v));
                    if let Some(e) = self.exists_atom(&v) {
                        c = c.with(e);
                    }
                    c.iotas.push(f.clone());
                    return self.prove(&c, goal, d);
                }
                _ => {}
            }
        }
        let terms = self.terms(ctx, goal);
        let mut cl = self.classes(ctx);
        let denoting: Vec<Term> = terms.iter().filter(|t| self.denotes(ctx, &mut cl, t)).cloned().collect();
        // choices on the right
        match goal {
            Formula::Or(a, b) => {
                if self.prove(ctx, a, d) || self.prove(ctx, b, d) {
                    return true;
                }
            }
            Formula::Ex(y, b) => {
                if denoting.iter().any(|t| self.prove(ctx, &substitute(b, y, t), d)) {
                    return true;
                }
            }
            Formula::Iota(y, fy, gy) => {
                for t in &denoting {
                    if self.prove(ctx, &substitute(fy, y, t), d) && self.prove(ctx, &substitute(gy, y, t), d) {
                        let z = self.fresh_for(ctx, goal);
                        let mut c = ctx.with(substitute(fy, y, &z));
                        if let Some(e) = self.exists_atom(&z) {
                            c = c.with(e);
                        }
                        if self.prove(&c, &Formula::eq(z, t.clone()), d) {
                            return true;
                        }
                    }
                }
            }
            _ => {}
        }
        // choices on the left
        for (i, f) in ctx.fs.iter().enumerate() {
            match &**f {
                Formula::Imp(a, b) => {
                    if self.prove(ctx, a, d) && self.prove(&ctx.without(i).with((**b).clone()), goal, d) {
                        return true;
                    }
                }
                Formula::All(y, b) => {
                    for t in &denoting {
                        let inst = substitute(b, y, t);
                        if !ctx.has(&inst) && self.prove(&ctx.with(inst), goal, d) {
                            return true;
                        }
                    }
                }
                _ => {}
            }
        }
        // an identity only matters once the goal is atomic, and the context
        // survives every rule on the right, so ιE² waits until then
        if !(goal.is_atomic() || *goal == Formula::Bottom) {
            return false;
        }
        for iota in &ctx.iotas {
            let Formula::Iota(y, fy, _) = &**iota else { unreachable!() };
            for (k, t1) in denoting.iter().enumerate() {
                for t2 in &denoting[k + 1..] {
                    let id = Formula::eq(t1.clone(), t2.clone());
                    if self.atomic(ctx, &id) {
                        continue;
                    }
                    if self.prove(ctx, &substitute(fy, y, t1), d)
                        && self.prove(ctx, &substitute(fy, y, t2), d)
                        && self.prove(&ctx.with(id), goal, d)
                    {
                        return true;
                    }
                }
            }
        }
        false
    }
}
