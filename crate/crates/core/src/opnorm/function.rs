use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::groups::{Element, GroupSpec};

/// A finitely supported complex function on a group, with no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct FinSuppFun {
    pub group: GroupSpec,
    values: BTreeMap<Element, Complex64>,
}

impl FinSuppFun {
    pub fn new(group: GroupSpec) -> Self {
        Self { group, values: BTreeMap::new() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Element, Complex64)>>(group: GroupSpec, pairs: I) -> Self {
        let mut f = Self::new(group);
        for (x, v) in pairs {
            f.add(x, v);
        }
        f
    }

    pub fn indicator<'a, I: IntoIterator<Item = &'a Element>>(group: GroupSpec, support: I) -> Self {
        Self::from_pairs(group, support.into_iter().map(|x| (x.clone(), Complex64::new(1.0, 0.0))))
    }

    pub fn delta(group: GroupSpec, x: Element) -> Self {
        Self::from_pairs(group, [(x, Complex64::new(1.0, 0.0))])
    }

    pub fn add(&mut self, x: Element, v: Complex64) {
        let sum = self.get(&x) + v;
        if sum == Complex64::default() {
            self.values.remove(&x);
        } else {
            self.values.insert(x, sum);
        }
    }

    pub fn get(&self, x: &Element) -> Complex64 {
        self.values.get(x).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, Complex64)> {
        self.values.iter().map(|(x, v)| (x, *v))
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.values.keys()
    }

    pub fn l1(&self) -> f64 {
        self.values.values().map(|v| v.norm()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.values.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Pointwise product `φ·f`.
    pub fn multiply_by(&self, phi: impl Fn(&Element) -> Complex64) -> Self {
        Self::from_pairs(self.group.clone(), self.values.iter().map(|(x, v)| (x.clone(), phi(x) * v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_are_not_stored() {
        let g = GroupSpec::FreeAbelian { d: 1 };
        let x = Element::FreeAbelian { v: vec![2] };
        let mut f = FinSuppFun::delta(g.clone(), x.clone());
        f.add(x.clone(), Complex64::new(-1.0, 0.0));
        assert!(f.is_empty());
        let h = FinSuppFun::indicator(g, [&x, &Element::FreeAbelian { v: vec![0] }]);
        assert_eq!(h.l1(), 2.0);
        assert!((h.l2() - 2f64.sqrt()).abs() < 1e-15);
        let cut = h.multiply_by(|y| if *y == x { Complex64::default() } else { Complex64::new(1.0, 0.0) });
        assert_eq!(cut.len(), 1);
    }
}
