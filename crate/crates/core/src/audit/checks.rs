use rand::seq::SliceRandom;
use rand::Rng;

use super::conjunctive::{self, Search};
use super::witness::{star_negations, Direction, Witness};
use super::{Bounds, Budget, Method, Outcome, PropertyId, Verdict, MODUS_PONENS_READING};
use crate::formula::{
    enumerate_formulas, fresh_letter, parse, Formula, FormulaSampler, FormulaSet,
};
use crate::para::{logic_entails, LogicSpec};
use crate::semantics::Domain;

fn f(text: &str) -> Formula {
    parse(text).expect("well-formed")
}

fn set(items: &[&str]) -> FormulaSet {
    items.iter().map(|s| f(s)).collect()
}

fn one(x: &Formula) -> FormulaSet {
    std::iter::once(x.clone()).collect()
}

/// Seed of one table cell, stable across runs and platforms.
pub(crate) fn cell_seed(seed: u64, property: PropertyId, spec: &LogicSpec) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let key = format!("{}/{}", property.key(), spec.label());
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Random instances for the sampled checks.
struct Generator {
    sampler: FormulaSampler,
    depth: usize,
    gamma_size: usize,
}

impl Generator {
    fn new(budget: &Budget, seed: u64) -> Self {
        Generator {
            sampler: FormulaSampler::new(budget.letter_names(), budget.depth, seed),
            depth: budget.depth,
            gamma_size: budget.gamma_size,
        }
    }

    fn formula(&mut self) -> Formula {
        self.sampler.formula()
    }

    fn premises(&mut self) -> FormulaSet {
        self.sampler.set(self.gamma_size)
    }

    fn nonempty(&mut self) -> FormulaSet {
        let n = self.sampler.rng().gen_range(1..=self.gamma_size);
        (0..n).map(|_| self.formula()).collect()
    }

    fn member(&mut self, gamma: &FormulaSet) -> Option<Formula> {
        gamma.as_slice().choose(self.sampler.rng()).cloned()
    }

    /// A formula likely, but not certain, to follow from `gamma`.
    fn conclusion(&mut self, gamma: &FormulaSet) -> Formula {
        let kind = self.sampler.rng().gen_range(0..5);
        let Some(a) = self.member(gamma) else {
            return self.formula();
        };
        match kind {
            0 => self.formula(),
            1 => a,
            2 => a.or(self.formula()),
            3 => {
                let b = self.member(gamma).expect("nonempty");
                a.and(b)
            }
            _ => self.sampler.formula_within(1),
        }
    }

    /// Formulas over the letters of `gamma` plus one fresh letter.
    fn probes_over(&mut self, gamma: &FormulaSet, count: usize) -> Vec<Formula> {
        let mut letters = gamma.letters();
        letters.insert(fresh_letter(&letters));
        let mut local = FormulaSampler::new(&letters, self.depth, self.sampler.rng().gen());
        (0..count).map(|_| local.formula()).collect()
    }
}

struct Ctx<'a> {
    spec: &'a LogicSpec,
    budget: &'a Budget,
    property: PropertyId,
}

impl Ctx<'_> {
    fn ent(&self, gamma: &FormulaSet, alpha: &Formula) -> bool {
        logic_entails(self.spec, gamma, alpha)
            .expect("sampled premise sets stay within the subset bound")
    }

    fn verdict(
        &self,
        outcome: Outcome,
        method: Method,
        witness: Option<Witness>,
        samples_run: usize,
    ) -> Verdict {
        Verdict {
            property: self.property,
            logic: self.spec.label(),
            para_depth: self.spec.para_depth,
            outcome,
            method,
            witness,
            samples_run,
            bounds: self.budget.bounds(),
            note: None,
        }
    }

    /// Outcome of a universal claim after a search for violations.
    fn universal(&self, found: Found) -> Verdict {
        match found.witness {
            None => self.verdict(Outcome::Holds, Method::Sampled, None, found.samples_run),
            Some(w) => {
                let method = match w {
                    Witness::ConjunctiveRefutation { .. } => Method::Bounded,
                    _ => Method::Witness,
                };
                self.confirmed(Outcome::Fails, method, w, found.samples_run)
            }
        }
    }

    /// A verdict resting on `witness`, downgraded if the witness does not
    /// replay.
    fn confirmed(
        &self,
        outcome: Outcome,
        method: Method,
        witness: Witness,
        samples_run: usize,
    ) -> Verdict {
        if witness.replay(self.spec) {
            self.verdict(outcome, method, Some(witness), samples_run)
        } else {
            let mut v = self.verdict(Outcome::Undecided, method, Some(witness), samples_run);
            v.note = Some("evidence did not replay".into());
            v
        }
    }
}

fn with_note(mut v: Verdict, note: impl Into<String>) -> Verdict {
    let note = note.into();
    v.note = Some(match v.note.take() {
        Some(old) => format!("{old}; {note}"),
        None => note,
    });
    v
}

struct Found {
    witness: Option<Witness>,
    samples_run: usize,
}

/// Tests the curated instances, then `budget.samples` drawn ones, stopping
/// at the first violation.
fn search<T>(
    budget: &Budget,
    curated: Vec<T>,
    mut draw: impl FnMut() -> T,
    mut test: impl FnMut(&T) -> Option<Witness>,
) -> Found {
    let mut samples_run = 0;
    let drawn = (0..budget.samples).map(|_| draw());
    for instance in curated.into_iter().chain(drawn) {
        samples_run += 1;
        if let Some(witness) = test(&instance) {
            return Found {
                witness: Some(witness),
                samples_run,
            };
        }
    }
    Found {
        witness: None,
        samples_run,
    }
}

pub(crate) fn run(spec: &LogicSpec, property: PropertyId, budget: &Budget) -> Verdict {
    let ctx = Ctx {
        spec,
        budget,
        property,
    };
    let mut gen = Generator::new(budget, cell_seed(budget.seed, property, spec));
    match property {
        PropertyId::Explosive => explosive(&ctx, &mut gen),
        PropertyId::Paraconsistent => paraconsistent(&ctx, &mut gen),
        PropertyId::JointConsistency => joint_consistency(&ctx),
        PropertyId::ConjunctiveProperty => conjunctive_property(&ctx, &mut gen),
        PropertyId::InconsistentSetsExist => inconsistent_sets(&ctx),
        PropertyId::PIdempotent => p_idempotent(&ctx, &mut gen),
        PropertyId::Inclusion => inclusion(&ctx, &mut gen),
        PropertyId::Monotonicity => monotonicity(&ctx, &mut gen),
        PropertyId::Idempotency => idempotency(&ctx, &mut gen),
        PropertyId::Transitivity => transitivity(&ctx, &mut gen),
        PropertyId::WeakTransitivity => weak_transitivity(&ctx, &mut gen),
        PropertyId::ModusPonens => modus_ponens(&ctx, &mut gen),
        PropertyId::FullDt
        | PropertyId::ModifiedFullDt
        | PropertyId::WeakDtFwd
        | PropertyId::ModifiedWeakDtFwd => deduction(&ctx, &mut gen),
    }
}

fn explosive(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let m = &ctx.spec.matrix;
    if ctx.spec.para_depth == 0 && m.has_star_property() {
        let v = ctx.confirmed(
            Outcome::Holds,
            Method::Exact,
            Witness::StarCondition {
                negations: star_negations(m),
            },
            0,
        );
        return with_note(v, "a model of a set yielding x and ~x would designate both");
    }
    let probe = Witness::NonExplosion {
        premises: set(&["p", "~p"]),
        formula: f("p"),
        fresh: f("q"),
    };
    if probe.replay(ctx.spec) {
        return ctx.verdict(Outcome::Fails, Method::Witness, Some(probe), 1);
    }
    let found = search(
        ctx.budget,
        vec![],
        || {
            let gamma = gen.nonempty();
            let x = gen.conclusion(&gamma);
            (gamma, x)
        },
        |(gamma, x)| {
            if !ctx.ent(gamma, x) || !ctx.ent(gamma, &x.clone().neg()) {
                return None;
            }
            let mut letters = gamma.letters();
            letters.extend(x.letters());
            let fresh = Formula::letter(&fresh_letter(&letters));
            (!ctx.ent(gamma, &fresh)).then(|| Witness::NonExplosion {
                premises: gamma.clone(),
                formula: x.clone(),
                fresh,
            })
        },
    );
    ctx.universal(found)
}

/// The negation of explosiveness. A sampled explosion claim cannot refute
/// paraconsistency, so it leaves the cell undecided.
fn paraconsistent(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let mut v = explosive(ctx, gen);
    v.property = PropertyId::Paraconsistent;
    v.outcome = match (v.outcome, v.method) {
        (Outcome::Holds, Method::Sampled) => {
            v.note = Some("explosion only sampled".into());
            Outcome::Undecided
        }
        (Outcome::Holds, _) => Outcome::Fails,
        (Outcome::Fails, _) => Outcome::Holds,
        (Outcome::Undecided, _) => Outcome::Undecided,
    };
    v
}

fn no_inconsistent_sets(ctx: &Ctx) -> Verdict {
    let w = Witness::NoInconsistentSets {
        premises: set(&["p", "~p"]),
        fresh: f("q"),
    };
    with_note(
        ctx.confirmed(Outcome::Fails, Method::Exact, w, 1),
        "the empty subset is consistent and yields no fresh letter",
    )
}

fn small_formulas() -> impl Iterator<Item = Formula> {
    enumerate_formulas(["p"], 2)
}

fn bounded_search_bounds() -> Bounds {
    Bounds {
        max_depth: 2,
        max_letters: 1,
        max_gamma: 2,
    }
}

fn joint_consistency(ctx: &Ctx) -> Verdict {
    if ctx.spec.para_depth >= 1 {
        return no_inconsistent_sets(ctx);
    }
    let mut tried = 0;
    for x in small_formulas() {
        tried += 1;
        let w = Witness::JointConsistency { formula: x };
        if w.replay(ctx.spec) {
            return ctx.verdict(Outcome::Holds, Method::Witness, Some(w), tried);
        }
    }
    let mut v = ctx.verdict(Outcome::Undecided, Method::Bounded, None, tried);
    v.bounds = bounded_search_bounds();
    v
}

fn inconsistent_sets(ctx: &Ctx) -> Verdict {
    if ctx.spec.para_depth >= 1 {
        return no_inconsistent_sets(ctx);
    }
    let candidates = small_formulas()
        .map(|x| [x.clone(), x.neg()].into_iter().collect::<FormulaSet>())
        .chain(small_formulas().map(|x| one(&x)));
    let mut tried = 0;
    for premises in candidates {
        tried += 1;
        let fresh = Formula::letter(&fresh_letter(&premises.letters()));
        let w = Witness::InconsistentSet { premises, fresh };
        if w.replay(ctx.spec) {
            return ctx.verdict(Outcome::Holds, Method::Witness, Some(w), tried);
        }
    }
    let mut v = ctx.verdict(Outcome::Undecided, Method::Bounded, None, tried);
    v.bounds = bounded_search_bounds();
    v
}

fn conjunctive_property(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    if ctx.spec.para_depth >= 1 {
        return conjunctive_refutation(ctx);
    }
    let m = &ctx.spec.matrix;
    let found = search(
        ctx.budget,
        vec![],
        || (gen.formula(), gen.formula()),
        |(x, y)| {
            let pair: FormulaSet = [x.clone(), y.clone()].into_iter().collect();
            let conj = x.clone().and(y.clone());
            let domain = Domain::for_formulas(m, [x, y]);
            let same = domain.models_of_set(&pair).expect("covered")
                == domain.models(&conj).expect("covered");
            if same {
                return None;
            }
            let letters: Vec<String> = domain.letters().to_vec();
            let depth = conjunctive::search_depth(letters.len(), ctx.budget.depth);
            match conjunctive::refute(ctx.spec, x, y, &letters, depth, None) {
                Search::Survivor(_) => None,
                Search::Refuted { probes, candidates } => Some(Witness::ConjunctiveRefutation {
                    x: x.clone(),
                    y: y.clone(),
                    probes,
                    letters,
                    max_depth: depth,
                    candidates,
                }),
            }
        },
    );
    with_note(
        ctx.universal(found),
        "compares Mod({x, y}) with Mod(x & y), which fixes the consequence sets",
    )
}

/// For `x = p`, `y = ~p`, every candidate over `{p, q}` disagrees with
/// `{x, y}` on whether it yields `p | q`, `~p | q` or `q`.
fn conjunctive_refutation(ctx: &Ctx) -> Verdict {
    let letters = vec!["p".to_string(), "q".to_string()];
    let depth = conjunctive::search_depth(letters.len(), ctx.budget.depth);
    let (x, y) = (f("p"), f("~p"));
    let probes = [f("p | q"), f("~p | q"), f("q")];
    let mut v = match conjunctive::refute(ctx.spec, &x, &y, &letters, depth, Some(&probes)) {
        Search::Refuted { probes, candidates } => {
            let w = Witness::ConjunctiveRefutation {
                x,
                y,
                probes,
                letters,
                max_depth: depth,
                candidates,
            };
            ctx.confirmed(Outcome::Fails, Method::Bounded, w, candidates as usize)
        }
        Search::Survivor(z) => {
            let mut v = ctx.verdict(Outcome::Undecided, Method::Bounded, None, 0);
            v.note = Some(format!("{z} agrees with {{p, ~p}} on every probe"));
            v
        }
    };
    v.bounds = Bounds {
        max_depth: depth,
        max_letters: 2,
        max_gamma: 2,
    };
    v
}

fn p_idempotent(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let m = &ctx.spec.matrix;
    let once = LogicSpec::new(m.clone(), 1);
    let twice = LogicSpec::new(m.clone(), 2);
    let curated = vec![
        (set(&["p", "~p"]), f("q")),
        (set(&["p", "~p"]), f("p | q")),
        (set(&["~(p -> p)"]), f("~(p -> p)")),
    ];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.premises();
            let alpha = gen.conclusion(&gamma);
            (gamma, alpha)
        },
        |(gamma, alpha)| {
            let e1 = logic_entails(&once, gamma, alpha).expect("bounded");
            let e2 = logic_entails(&twice, gamma, alpha).expect("bounded");
            (e1 != e2).then(|| Witness::ParaIdempotence {
                premises: gamma.clone(),
                formula: alpha.clone(),
                once: e1,
                twice: e2,
            })
        },
    );
    let note = if ctx.spec.para_depth == 0 {
        "compares the once and twice transformed logics on the same queries"
    } else {
        "compares the once and twice transformed logics; transforming both sides again preserves equality"
    };
    with_note(ctx.universal(found), note)
}

fn inclusion(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let curated = vec![
        (set(&["~(p -> p)"]), f("~(p -> p)")),
        (set(&["p & ~p"]), f("p & ~p")),
    ];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.nonempty();
            let alpha = gen.member(&gamma).expect("nonempty");
            (gamma, alpha)
        },
        |(gamma, alpha)| {
            (!ctx.ent(gamma, alpha)).then(|| Witness::Inclusion {
                premises: gamma.clone(),
                formula: alpha.clone(),
            })
        },
    );
    ctx.universal(found)
}

fn monotonicity(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let curated = vec![
        (set(&["p"]), set(&["~p"]), f("p")),
        (set(&["p | q"]), set(&["~p"]), f("q | p")),
    ];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.premises();
            let extra = gen.premises();
            let alpha = gen.conclusion(&gamma);
            (gamma, extra, alpha)
        },
        |(gamma, extra, alpha)| {
            (ctx.ent(gamma, alpha) && !ctx.ent(&gamma.union(extra), alpha)).then(|| {
                Witness::Monotonicity {
                    premises: gamma.clone(),
                    extra: extra.clone(),
                    formula: alpha.clone(),
                }
            })
        },
    );
    ctx.universal(found)
}

/// Drops members of `delta` while it still entails `alpha`.
fn shrink(ctx: &Ctx, delta: &FormulaSet, alpha: &Formula) -> FormulaSet {
    let mut current = delta.clone();
    for d in delta {
        let smaller: FormulaSet = current.iter().filter(|x| *x != d).cloned().collect();
        if ctx.ent(&smaller, alpha) {
            current = smaller;
        }
    }
    current
}

/// Cn(Cn(G)) ⊆ Cn(G), probed: the probes that follow from `G` must not
/// yield a probe that does not.
fn idempotency(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let curated = vec![(set(&["p", "~p"]), vec![f("p | q"), f("~p"), f("q")])];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.premises();
            let mut probes: Vec<Formula> = gamma.iter().take(2).cloned().collect();
            probes.push(gen.conclusion(&gamma));
            probes.push(gen.conclusion(&gamma));
            probes.extend(gen.probes_over(&gamma, 3));
            (gamma, probes)
        },
        |(gamma, probes)| {
            let (inside, outside): (Vec<&Formula>, Vec<&Formula>) =
                probes.iter().partition(|p| ctx.ent(gamma, p));
            let closure: FormulaSet = inside.into_iter().cloned().collect();
            outside
                .into_iter()
                .find(|phi| ctx.ent(&closure, phi))
                .map(|phi| Witness::Transitivity {
                    premises: gamma.clone(),
                    intermediate: shrink(ctx, &closure, phi),
                    formula: phi.clone(),
                })
        },
    );
    with_note(
        ctx.universal(found),
        "consequences probed on finite formula sets",
    )
}

fn transitivity(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let curated = vec![(set(&["p", "~p"]), set(&["p | q", "~p"]), f("q"))];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.premises();
            let k = gen.sampler.rng().gen_range(1..=3);
            let delta: FormulaSet = (0..k)
                .map(|_| gen.conclusion(&gamma))
                .filter(|d| ctx.ent(&gamma, d))
                .collect();
            let alpha = gen.conclusion(&delta);
            (gamma, delta, alpha)
        },
        |(gamma, delta, alpha)| {
            let holds = delta.iter().all(|d| ctx.ent(gamma, d))
                && ctx.ent(delta, alpha)
                && !ctx.ent(gamma, alpha);
            holds.then(|| Witness::Transitivity {
                premises: gamma.clone(),
                intermediate: delta.clone(),
                formula: alpha.clone(),
            })
        },
    );
    ctx.universal(found)
}

/// A conclusion of `{x}`, preferring entailed candidates.
fn chain_step(ctx: &Ctx, gen: &mut Generator, x: &Formula) -> Formula {
    let premises = one(x);
    let mut last = x.clone();
    for _ in 0..6 {
        last = gen.conclusion(&premises);
        if ctx.ent(&premises, &last) {
            break;
        }
    }
    last
}

fn weak_transitivity(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let mut live = 0;
    let found = search(
        ctx.budget,
        vec![(f("p"), f("p | q"), f("(p | q) | r"))],
        || {
            let a = gen.formula();
            let b = chain_step(ctx, gen, &a);
            let c = chain_step(ctx, gen, &b);
            (a, b, c)
        },
        |(a, b, c)| {
            if !(ctx.ent(&one(a), b) && ctx.ent(&one(b), c)) {
                return None;
            }
            live += 1;
            (!ctx.ent(&one(a), c)).then(|| Witness::WeakTransitivity {
                first: a.clone(),
                second: b.clone(),
                third: c.clone(),
            })
        },
    );
    let v = ctx.universal(found);
    let note = format!("{live} of {} chains had both premises", v.samples_run);
    with_note(v, note)
}

fn modus_ponens(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let curated = vec![(set(&["p", "~p & (p -> q)"]), f("p"), f("q"))];
    let found = search(
        ctx.budget,
        curated,
        || {
            let mut gamma = gen.premises();
            let alpha = gen.conclusion(&gamma);
            let beta = if gen.sampler.rng().gen_bool(0.5) {
                gen.conclusion(&gamma)
            } else {
                gen.formula()
            };
            if gen.sampler.rng().gen_bool(0.5) {
                let a = gen.formula();
                let b = gen.formula();
                gamma.insert(a.clone().imp(b));
                gamma.insert(a);
            }
            (gamma, alpha, beta)
        },
        |(gamma, alpha, beta)| {
            let imp = alpha.clone().imp(beta.clone());
            (ctx.ent(gamma, alpha) && ctx.ent(gamma, &imp) && !ctx.ent(gamma, beta)).then(|| {
                Witness::ModusPonens {
                    premises: gamma.clone(),
                    antecedent: alpha.clone(),
                    consequent: beta.clone(),
                }
            })
        },
    );
    with_note(ctx.universal(found), MODUS_PONENS_READING)
}

fn deduction(ctx: &Ctx, gen: &mut Generator) -> Verdict {
    let (modified, both_ways) = match ctx.property {
        PropertyId::FullDt => (false, true),
        PropertyId::ModifiedFullDt => (true, true),
        PropertyId::WeakDtFwd => (false, false),
        PropertyId::ModifiedWeakDtFwd => (true, false),
        other => unreachable!("{other} is not a deduction variant"),
    };
    let curated = vec![
        (FormulaSet::new(), f("p & (p -> q)"), f("q")),
        (FormulaSet::new(), f("~(p -> p)"), f("~(p -> p)")),
        (FormulaSet::new(), f("p & ~p"), f("p & ~p")),
        (FormulaSet::new(), f("p"), f("p")),
    ];
    let found = search(
        ctx.budget,
        curated,
        || {
            let gamma = gen.premises();
            let alpha = if gen.sampler.rng().gen_bool(0.5) {
                gen.formula()
            } else {
                gen.conclusion(&gamma)
            };
            let mut extended = gamma.clone();
            extended.insert(alpha.clone());
            let beta = gen.conclusion(&extended);
            (gamma, alpha, beta)
        },
        |(gamma, alpha, beta)| {
            let plain = alpha.clone().imp(beta.clone());
            let implication = if modified {
                alpha.clone().imp(plain)
            } else {
                plain
            };
            let mut extended = gamma.clone();
            extended.insert(alpha.clone());
            let lhs = ctx.ent(&extended, beta);
            let rhs = ctx.ent(gamma, &implication);
            let direction = if lhs && !rhs {
                Direction::Forward
            } else if both_ways && rhs && !lhs {
                Direction::Converse
            } else {
                return None;
            };
            Some(Witness::Deduction {
                premises: gamma.clone(),
                antecedent: alpha.clone(),
                consequent: beta.clone(),
                implication,
                direction,
            })
        },
    );
    let v = ctx.universal(found);
    if both_ways {
        v
    } else {
        with_note(v, "forward direction only")
    }
}
