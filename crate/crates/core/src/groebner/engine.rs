//! The Buchberger loop: pair queue, Gebauer-Moeller update, batched
//! parallel reduction and final inter-reduction.

use std::time::Instant;

use rayon::prelude::*;

use super::ipoly::{reduce, reduce_until, spoly, IPoly, Reducer};
use super::{GbStats, GroebnerOptions, Strategy};
use crate::poly::{Monomial, MonomialOrder};

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) enum Outcome {
    Done(Vec<IPoly>, GbStats),
    Exhausted(Vec<IPoly>, GbStats, String),
}

struct State<'o> {
    order: MonomialOrder,
    opts: &'o GroebnerOptions,
    polys: Vec<IPoly>,
    /// Indices into `polys` whose leading monomials form the current
    /// minimal generating set of the leading ideal.
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GbStats,
    start: Instant,
}

impl State<'_> {
    fn key(&self, p: &Pair) -> (u32, u32) {
        match self.opts.strategy {
            Strategy::Normal => (p.lcm.degree(), 0),
            Strategy::Sugar => (p.sugar, p.lcm.degree()),
        }
    }

    fn reducers(&self) -> Vec<Reducer<'_>> {
        self.active
            .iter()
            .map(|&k| Reducer {
                lm: *self.polys[k].lm(),
                mask: self.polys[k].lm().support_mask(),
                poly: &self.polys[k],
            })
            .collect()
    }

    /// Gebauer-Moeller installation of a new basis element.
    fn update(&mut self, h: IPoly) {
        let hi = self.polys.len();
        let hlm = *h.lm();
        let hsugar = h.sugar;
        self.polys.push(h);

        let cand: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| {
                let glm = self.polys[g].lm();
                let lcm = hlm.lcm(glm);
                let sugar =
                    (hsugar + lcm.degree() - hlm.degree()).max(self.polys[g].sugar + lcm.degree() - glm.degree());
                Pair {
                    i: g,
                    j: hi,
                    lcm,
                    sugar,
                }
            })
            .collect();
        let created = cand.len();

        // chain criterion among the new pairs: drop (g1, h) if some other new
        // pair's lcm properly divides it (keep one representative of equal lcms)
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            let coprime = self.polys[cand[a].i].lm().is_coprime(&hlm);
            if coprime {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm) && (cand[b].lcm != cand[a].lcm || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // among equal lcms, if any pair is coprime the whole class is dropped
        let mut new_pairs = Vec::new();
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            let class_coprime = cand
                .iter()
                .any(|p| p.lcm == cand[a].lcm && self.polys[p.i].lm().is_coprime(&hlm));
            if !class_coprime {
                new_pairs.push(cand[a].clone());
            }
        }

        // old pairs whose lcm is divisible by lm(h) with both new lcms different
        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = polys[p.i].lm().lcm(&hlm);
            let l2 = polys[p.j].lm().lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.stats.pairs_pruned += (created - new_pairs.len() + before - self.pairs.len()) as u64;
        self.stats.pairs_created += created as u64;
        self.pairs.extend(new_pairs);

        let polys = &self.polys;
        self.active.retain(|&g| !hlm.divides(polys[g].lm()));
        self.active.push(hi);
        self.stats.max_basis = self.stats.max_basis.max(self.active.len());
        self.stats.max_queue = self.stats.max_queue.max(self.pairs.len());
    }

    fn select_batch(&mut self) -> Vec<Pair> {
        let order = self.order;
        let best = self.pairs.iter().map(|p| self.key(p)).min().unwrap();
        let (mut batch, rest): (Vec<Pair>, Vec<Pair>) = self.pairs.drain(..).partition(|p| {
            let k = match self.opts.strategy {
                Strategy::Normal => (p.lcm.degree(), 0),
                Strategy::Sugar => (p.sugar, p.lcm.degree()),
            };
            k == best
        });
        self.pairs = rest;
        batch.sort_by(|a, b| order.cmp(&a.lcm, &b.lcm).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
        if batch.len() > self.opts.batch_size {
            self.pairs.extend(batch.drain(self.opts.batch_size..));
        }
        batch
    }

    fn budget_exceeded(&self) -> Option<String> {
        if self.stats.pairs >= self.opts.max_pairs {
            return Some(format!("pair budget of {} exhausted", self.opts.max_pairs));
        }
        if let Some(s) = self.opts.max_seconds {
            if self.start.elapsed().as_secs_f64() >= s {
                return Some(format!("time budget of {s} s exhausted"));
            }
        }
        None
    }

    fn deadline(&self) -> Option<Instant> {
        self.opts
            .max_seconds
            .map(|s| self.start + std::time::Duration::from_secs_f64(s))
    }

    fn exhausted(mut self, why: String) -> Outcome {
        self.finish_stats();
        let partial = self.active.iter().map(|&k| self.polys[k].clone()).collect();
        Outcome::Exhausted(partial, self.stats, why)
    }

    fn finish_stats(&mut self) {
        self.stats.seconds = self.start.elapsed().as_secs_f64();
    }
}

pub(crate) fn run(inputs: Vec<IPoly>, order: MonomialOrder, opts: &GroebnerOptions) -> Outcome {
    let mut st = State {
        order,
        opts,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: GbStats::default(),
        start: Instant::now(),
    };
    let mut inputs: Vec<IPoly> = inputs.into_iter().filter(|p| !p.is_zero()).collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()).then(a.len().cmp(&b.len())));
    for f in inputs {
        let h = reduce(f, &st.reducers(), order, opts.tail_reduce);
        if !h.is_zero() {
            st.update(h);
        }
    }
    while !st.pairs.is_empty() {
        if let Some(why) = st.budget_exceeded() {
            return st.exhausted(why);
        }
        let batch = st.select_batch();
        let deadline = st.deadline();
        let reduced: Option<Vec<IPoly>> = {
            let reds = st.reducers();
            let polys = &st.polys;
            let work = |p: &Pair| {
                reduce_until(
                    spoly(&polys[p.i], &polys[p.j], order),
                    &reds,
                    order,
                    opts.tail_reduce,
                    deadline,
                )
            };
            if opts.parallel && batch.len() > 1 {
                batch.par_iter().map(work).collect()
            } else {
                batch.iter().map(work).collect()
            }
        };
        let Some(reduced) = reduced else {
            let why = format!("time budget of {} s exhausted", opts.max_seconds.unwrap_or(0.0));
            return st.exhausted(why);
        };
        st.stats.pairs += batch.len() as u64;
        let mut first = true;
        for h in reduced {
            // later results of the batch still need the elements added
            // before them
            let h = if first || h.is_zero() {
                h
            } else {
                match reduce_until(h, &st.reducers(), order, opts.tail_reduce, deadline) {
                    Some(h) => h,
                    None => {
                        let why = format!("time budget of {} s exhausted", opts.max_seconds.unwrap_or(0.0));
                        return st.exhausted(why);
                    }
                }
            };
            if h.is_zero() {
                st.stats.zero_reductions += 1;
                continue;
            }
            if opts.verbose {
                eprintln!("[gb]   new lm {:?} terms {} bits {}", h.lm(), h.len(), h.coeff_bits());
            }
            first = false;
            st.update(h);
        }
        if opts.verbose {
            eprintln!(
                "[gb] pairs {} zero {} basis {} queue {} key {:?} batch {} t {:.1}s",
                st.stats.pairs,
                st.stats.zero_reductions,
                st.active.len(),
                st.pairs.len(),
                st.key(&batch[0]),
                batch.len(),
                st.start.elapsed().as_secs_f64()
            );
        }
    }
    let basis = interreduce(
        st.active.iter().map(|&k| st.polys[k].clone()).collect(),
        order,
        opts.parallel,
    );
    st.finish_stats();
    Outcome::Done(basis, st.stats)
}

/// Reduced basis from a Groebner basis whose leading monomials are minimal
/// generators: each element is fully reduced by the others.
pub(crate) fn interreduce(mut g: Vec<IPoly>, order: MonomialOrder, parallel: bool) -> Vec<IPoly> {
    g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<IPoly> = Vec::new();
    for p in g {
        if minimal.iter().any(|q| q.lm().divides(p.lm())) {
            continue;
        }
        minimal.retain(|q| !p.lm().divides(q.lm()));
        minimal.push(p);
    }
    let n = minimal.len();
    let work = |k: usize| {
        let reds: Vec<Reducer> = (0..n)
            .filter(|&j| j != k)
            .map(|j| Reducer {
                lm: *minimal[j].lm(),
                mask: minimal[j].lm().support_mask(),
                poly: &minimal[j],
            })
            .collect();
        reduce(minimal[k].clone(), &reds, order, true)
    };
    // leading terms are irreducible by the others, so each result keeps its
    // leading monomial and the reductions are independent
    let mut out: Vec<IPoly> = if parallel {
        (0..n).into_par_iter().map(work).collect()
    } else {
        (0..n).map(work).collect()
    };
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    out
}
