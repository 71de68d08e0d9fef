//! Orbit and closure computations shared by the rack route and the matrix
//! route of certificate verification.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use crate::grp::GroupCtx;
use crate::matq::Mat;
use crate::rack::FiniteRack;
use crate::{Error, Result};

pub(crate) trait Space {
    type E: Clone + Eq + Hash + Ord;
    /// `a ▷ b`.
    fn act(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

pub(crate) struct RackSpace<'a>(pub &'a FiniteRack);

impl Space for RackSpace<'_> {
    type E = usize;
    fn act(&self, a: &usize, b: &usize) -> usize {
        self.0.op(*a, *b)
    }
}

pub(crate) struct GroupSpace<'a>(pub &'a GroupCtx);

impl Space for GroupSpace<'_> {
    type E = Mat;
    fn act(&self, a: &Mat, b: &Mat) -> Mat {
        self.0.conj(a, b)
    }
}

/// Orbit of `x` under the group generated by the translations `φ_g`.
pub(crate) fn orbit<S: Space>(sp: &S, gens: &[S::E], x: &S::E, cap: usize) -> Result<Vec<S::E>> {
    let mut seen: HashSet<S::E> = HashSet::from([x.clone()]);
    let mut out = vec![x.clone()];
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(y) = queue.pop_front() {
        for g in gens {
            let z = sp.act(g, &y);
            if seen.insert(z.clone()) {
                if out.len() >= cap {
                    return Err(Error::bound("orbit", cap, out.len() + 1));
                }
                out.push(z.clone());
                queue.push_back(z);
            }
        }
    }
    out.sort();
    Ok(out)
}

pub(crate) fn is_closed<S: Space>(sp: &S, set: &[S::E]) -> bool {
    let inside: HashSet<&S::E> = set.iter().collect();
    set.iter().all(|a| set.iter().all(|b| inside.contains(&sp.act(a, b))))
}

/// Whether the matrices pairwise commute in the group.
pub(crate) fn pairwise_commute(ctx: &GroupCtx, xs: &[Mat]) -> bool {
    xs.iter().enumerate().all(|(i, a)| xs[i + 1..].iter().all(|b| ctx.commute(a, b)))
}
