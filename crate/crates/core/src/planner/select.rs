//! Argmax engine shared by every greedy loop, with an optional lazy mode.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::scalar::Real;

const PARALLEL_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug)]
struct Entry<T> {
    key: T,
    id: usize,
}

/// Larger key first, then lower id.
fn beats<T: Real>(a: &Entry<T>, b: &Entry<T>) -> bool {
    match a.key.partial_cmp(&b.key).unwrap_or(Ordering::Equal) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.id < b.id,
    }
}

impl<T: Real> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Entry<T> {}

impl<T: Real> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .partial_cmp(&other.key)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Picks the candidate with the largest score each round, lowest id on ties.
///
/// In lazy mode scores from earlier rounds are kept as upper bounds, widened
/// by a tiny slack to absorb rounding, and only the current leader is
/// re-scored. Both modes return the same sequence provided the score function
/// has diminishing returns across rounds.
pub(crate) struct Selector<T> {
    lazy: bool,
    static_gains: bool,
    active: Vec<usize>,
    heap: BinaryHeap<Entry<T>>,
    started: bool,
    pub evaluations: usize,
}

impl<T: Real> Selector<T> {
    /// `static_gains` declares that scores never change between rounds.
    pub fn new(ids: Vec<usize>, lazy: bool, static_gains: bool) -> Self {
        Selector {
            lazy,
            static_gains,
            active: ids,
            heap: BinaryHeap::new(),
            started: false,
            evaluations: 0,
        }
    }

    fn slack(&self, x: T) -> T {
        if self.static_gains {
            T::zero()
        } else {
            T::eps() * T::of(1e-2) * (T::one() + x.abs())
        }
    }

    /// Scores every eligible active candidate; ineligible ones are dropped for
    /// good, so eligibility must never come back once lost.
    fn score_all<E, S>(&mut self, eligible: &E, score: &S) -> Vec<Entry<T>>
    where
        E: Fn(usize) -> bool + Sync,
        S: Fn(usize) -> T + Sync,
    {
        self.active.retain(|&i| eligible(i));
        self.evaluations += self.active.len();
        let eval = |&id: &usize| Entry { key: score(id), id };
        if self.active.len() >= PARALLEL_THRESHOLD {
            self.active.par_iter().map(eval).collect()
        } else {
            self.active.iter().map(eval).collect()
        }
    }

    pub fn next<E, S>(&mut self, eligible: E, score: S) -> Option<(usize, T)>
    where
        E: Fn(usize) -> bool + Sync,
        S: Fn(usize) -> T + Sync,
    {
        if !self.lazy {
            let scored = self.score_all(&eligible, &score);
            let best = scored.into_iter().reduce(|a, b| if beats(&b, &a) { b } else { a })?;
            self.active.retain(|&i| i != best.id);
            return Some((best.id, best.key));
        }
        if !self.started {
            self.started = true;
            let scored = self.score_all(&eligible, &score);
            self.active = Vec::new();
            let best = *scored.iter().reduce(|a, b| if beats(b, a) { b } else { a })?;
            self.heap = scored.into_iter().filter(|e| e.id != best.id).collect();
            return Some((best.id, best.key));
        }

        let mut best: Option<Entry<T>> = None;
        let mut losers = Vec::new();
        while let Some(&top) = self.heap.peek() {
            if !eligible(top.id) {
                self.heap.pop();
                continue;
            }
            let bound = Entry {
                key: top.key + self.slack(top.key),
                id: top.id,
            };
            if let Some(b) = &best {
                if beats(b, &bound) {
                    break;
                }
            }
            self.heap.pop();
            self.evaluations += 1;
            let fresh = Entry {
                key: score(top.id),
                id: top.id,
            };
            match best {
                Some(b) if beats(&b, &fresh) => losers.push(fresh),
                Some(b) => {
                    losers.push(b);
                    best = Some(fresh);
                }
                None => best = Some(fresh),
            }
        }
        self.heap.extend(losers);
        best.map(|b| (b.id, b.key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Score of `i` after `picked` rounds, decreasing across rounds.
    fn decaying(i: usize, picked: &[usize]) -> f64 {
        let base = ((i * 7919) % 13) as f64;
        let overlap = picked.iter().filter(|&&j| (i + j) % 3 == 0).count() as f64;
        base / (1.0 + overlap)
    }

    fn run(lazy: bool, n: usize) -> (Vec<usize>, usize) {
        let mut sel = Selector::new((0..n).collect(), lazy, false);
        let mut picked = Vec::new();
        while let Some((i, _)) = sel.next(|_| true, |i| decaying(i, &picked)) {
            picked.push(i);
        }
        (picked, sel.evaluations)
    }

    #[test]
    fn lazy_matches_eager() {
        for n in [1, 5, 20, 100] {
            let (eager, ee) = run(false, n);
            let (lazy, le) = run(true, n);
            assert_eq!(eager, lazy);
            assert!(le <= ee);
        }
    }

    #[test]
    fn ties_go_to_lowest_id() {
        for lazy in [false, true] {
            let mut sel = Selector::new(vec![3, 1, 2], lazy, false);
            assert_eq!(sel.next(|_| true, |_| 1.0).unwrap().0, 1);
            assert_eq!(sel.next(|_| true, |_| 1.0).unwrap().0, 2);
        }
    }

    #[test]
    fn static_gains_cost_one_evaluation_per_round() {
        let mut sel = Selector::new((0..10).collect(), true, true);
        sel.next(|_| true, |i| i as f64).unwrap();
        let after_first = sel.evaluations;
        for _ in 0..5 {
            sel.next(|_| true, |i| i as f64).unwrap();
        }
        assert_eq!(sel.evaluations - after_first, 5);
    }

    #[test]
    fn ineligible_candidates_are_dropped() {
        for lazy in [false, true] {
            let mut sel = Selector::new((0..4).collect(), lazy, false);
            let got = sel.next(|i| i % 2 == 0, |i| i as f64).unwrap();
            assert_eq!(got.0, 2);
            assert_eq!(sel.next(|i| i % 2 == 0, |i| i as f64).unwrap().0, 0);
            assert!(sel.next(|i| i % 2 == 0, |i| i as f64).is_none());
        }
    }
}
