use std::collections::HashMap;

/// Exponent vector of a monomial in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }
}

/// Monomials of one degree in graded-lexicographic order: `x_0^d` first,
/// `x_n^d` last.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    vars: usize,
    degree: u32,
    elements: Vec<Monomial>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(vars: usize, degree: u32) -> Self {
        assert!(vars >= 1);
        let mut elements = Vec::new();
        let mut current = vec![0u32; vars];
        fill(&mut current, 0, degree, &mut elements);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents.clone(), i))
            .collect();
        Self {
            vars,
            degree,
            elements,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[Monomial] {
        &self.elements
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}
