use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Ball, Element, Group, GroupSpec};

/// One minimal-length representative per coset `xH` meeting the ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetSection {
    pub group: GroupSpec,
    pub radius: u32,
    pub representatives: Vec<Element>,
    pub lengths: Vec<u32>,
}

impl CosetSection {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Scans the ball in BFS order and keeps the first element of each coset.
/// Lengths are nondecreasing along the scan, so the first hit is minimal in
/// its coset and ties go to the earliest-discovered element.
pub fn coset_section(group: &Group, ball: &Ball) -> CosetSection {
    let mut seen = HashSet::new();
    let mut representatives = Vec::new();
    let mut lengths = Vec::new();
    for (x, l) in ball.iter() {
        if seen.insert(group.coset_key(x)) {
            representatives.push(x.clone());
            lengths.push(l);
        }
    }
    CosetSection { group: group.spec().clone(), radius: ball.radius, representatives, lengths }
}
