use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::cache::BallCache;
use super::{Element, Group, GroupError, GroupSpec};

/// Default member-count budget for ball enumeration.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// The word-metric ball `B_n = {x : ℓ(x) ≤ n}` in BFS discovery order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ball {
    pub group: GroupSpec,
    pub radius: u32,
    members: Vec<Element>,
    lengths: Vec<u32>,
    #[serde(skip)]
    index: HashMap<Element, usize>,
}

impl Ball {
    pub(crate) fn from_parts(group: GroupSpec, radius: u32, members: Vec<Element>, lengths: Vec<u32>) -> Self {
        let index = members.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Self { group, radius, members, lengths, index }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in BFS discovery order (nondecreasing length).
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.members.iter().zip(self.lengths.iter().copied())
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    pub fn length(&self, x: &Element) -> Option<u32> {
        self.index.get(x).map(|&i| self.lengths[i])
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Elements of length exactly `radius`.
    pub fn boundary(&self) -> impl Iterator<Item = &Element> {
        let r = self.radius;
        self.iter().filter(move |(_, l)| *l == r).map(|(x, _)| x)
    }

    /// The sub-ball of radius `r ≤ self.radius`.
    pub fn truncate(&self, r: u32) -> Ball {
        let cut = self.lengths.partition_point(|&l| l <= r);
        Ball::from_parts(
            self.group.clone(),
            r.min(self.radius),
            self.members[..cut].to_vec(),
            self.lengths[..cut].to_vec(),
        )
    }
}

/// Level-by-level breadth-first search over the Cayley graph.
pub struct BallExplorer<'g> {
    group: &'g Group,
    generators: Vec<Element>,
    members: Vec<Element>,
    lengths: Vec<u32>,
    index: HashMap<Element, usize>,
    frontier_start: usize,
    radius: u32,
    budget: usize,
}

impl<'g> BallExplorer<'g> {
    pub fn new(group: &'g Group, budget: usize) -> Result<Self, GroupError> {
        let generators = group.letters().into_iter().map(|l| group.letter_element(l)).collect::<Result<Vec<_>, _>>()?;
        let e = group.identity();
        let mut index = HashMap::new();
        index.insert(e.clone(), 0);
        Ok(Self { group, generators, members: vec![e], lengths: vec![0], index, frontier_start: 0, radius: 0, budget })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn length_of(&self, x: &Element) -> Option<u32> {
        self.index.get(x).map(|&i| self.lengths[i])
    }

    /// Adds the sphere of radius `radius + 1`.
    pub fn grow(&mut self) -> Result<(), GroupError> {
        let end = self.members.len();
        let next = self.radius + 1;
        for i in self.frontier_start..end {
            for g in &self.generators {
                let y = self.group.multiply(&self.members[i], g)?;
                if self.index.contains_key(&y) {
                    continue;
                }
                if self.members.len() >= self.budget {
                    return Err(GroupError::BudgetExceeded { budget: self.budget, radius_reached: self.radius });
                }
                self.index.insert(y.clone(), self.members.len());
                self.members.push(y);
                self.lengths.push(next);
            }
        }
        self.frontier_start = end;
        self.radius = next;
        Ok(())
    }

    pub fn grow_to(&mut self, n: u32) -> Result<(), GroupError> {
        while self.radius < n {
            self.grow()?;
        }
        Ok(())
    }

    pub fn into_ball(self) -> Ball {
        Ball {
            group: self.group.spec().clone(),
            radius: self.radius,
            members: self.members,
            lengths: self.lengths,
            index: self.index,
        }
    }
}

/// Enumerates `B_n`, reading from and writing to `cache` when given.
pub fn ball(group: &Group, n: u32, budget: usize, cache: Option<&BallCache>) -> Result<Ball, GroupError> {
    if let Some(cache) = cache {
        if let Some(found) = cache.load(group.spec(), n)? {
            return Ok(found);
        }
    }
    let mut explorer = BallExplorer::new(group, budget)?;
    explorer.grow_to(n)?;
    let ball = explorer.into_ball();
    if let Some(cache) = cache {
        cache.store(&ball)?;
    }
    Ok(ball)
}

/// Exact word length of `x`, searching up to `max_radius` (or the budget).
pub fn word_length(
    group: &Group,
    x: &Element,
    max_radius: u32,
    budget: usize,
    cache: Option<&BallCache>,
) -> Result<u32, GroupError> {
    if let Some(cache) = cache {
        if let Some(b) = cache.load_any(group.spec(), max_radius)? {
            if let Some(l) = b.length(x) {
                return Ok(l);
            }
            if b.radius >= max_radius {
                return Err(GroupError::NotFound { radius: b.radius });
            }
        }
    }
    let mut explorer = BallExplorer::new(group, budget)?;
    loop {
        if let Some(l) = explorer.length_of(x) {
            return Ok(l);
        }
        if explorer.radius() >= max_radius {
            return Err(GroupError::NotFound { radius: explorer.radius() });
        }
        match explorer.grow() {
            Ok(()) => {}
            Err(GroupError::BudgetExceeded { radius_reached, .. }) => {
                return Err(GroupError::NotFound { radius: radius_reached })
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::IntMatrix;

    fn g(spec: GroupSpec) -> Group {
        Group::new(spec).unwrap()
    }

    #[test]
    fn free_abelian_sizes() {
        let z = g(GroupSpec::FreeAbelian { d: 1 });
        assert_eq!(ball(&z, 3, DEFAULT_BUDGET, None).unwrap().len(), 7);
        let z2 = g(GroupSpec::FreeAbelian { d: 2 });
        let b = ball(&z2, 2, DEFAULT_BUDGET, None).unwrap();
        assert_eq!(b.len(), 13);
        assert_eq!(b.boundary().count(), 8);
    }

    #[test]
    fn lamplighter_unit_ball() {
        let l = g(GroupSpec::Lamplighter { p: 2 });
        let b = ball(&l, 1, DEFAULT_BUDGET, None).unwrap();
        let expected = ["", "a", "t", "t^-1"].map(|w| l.parse(w).unwrap());
        assert_eq!(b.len(), 4);
        for x in &expected {
            assert!(b.contains(x));
        }
    }

    #[test]
    fn word_lengths() {
        let l = g(GroupSpec::Lamplighter { p: 2 });
        let x = l.parse("t a t^-1").unwrap();
        assert_eq!(word_length(&l, &x, 10, DEFAULT_BUDGET, None).unwrap(), 3);
        assert_eq!(word_length(&l, &l.identity(), 10, DEFAULT_BUDGET, None).unwrap(), 0);
        let z2 = g(GroupSpec::FreeAbelian { d: 2 });
        let v = Element::FreeAbelian { v: vec![2, -1] };
        assert_eq!(word_length(&z2, &v, 10, DEFAULT_BUDGET, None).unwrap(), 3);
        let far = Element::FreeAbelian { v: vec![20, 0] };
        assert!(matches!(word_length(&z2, &far, 5, DEFAULT_BUDGET, None), Err(GroupError::NotFound { radius: 5 })));
    }

    #[test]
    fn budget_is_an_error() {
        let bs = g(GroupSpec::BaumslagSolitar { p: 2, q: 3 });
        match ball(&bs, 10, 100, None) {
            Err(GroupError::BudgetExceeded { budget: 100, radius_reached }) => assert!(radius_reached < 10),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn truncation_matches_smaller_ball() {
        let s = g(GroupSpec::SemidirectZd { matrix: IntMatrix::parse("2,1;1,1").unwrap() });
        let b4 = ball(&s, 4, DEFAULT_BUDGET, None).unwrap();
        let b2 = ball(&s, 2, DEFAULT_BUDGET, None).unwrap();
        assert_eq!(b4.truncate(2).members(), b2.members());
    }
}
