use std::collections::{HashMap, HashSet};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("arrow `{0}` refers to an unknown object")]
    UnknownObject(String),
    #[error("no composite recorded for `{0}` followed by `{1}`")]
    MissingComposite(String, String),
    #[error("composite of `{0}` followed by `{1}` has the wrong endpoints")]
    BadComposite(String, String),
    #[error("composition is not associative on `{0}`, `{1}`, `{2}`")]
    NotAssociative(String, String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A morphism of a [`FiniteCategory`]: an identity or a non-identity arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Morphism {
    Identity(usize),
    Arrow(usize),
}

/// Finite category with explicit non-identity arrows; identities are implicit.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    // (f, g) -> g . f for target(f) = source(g); `None` means an identity
    composites: HashMap<(usize, usize), Option<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl FiniteCategory {
    /// `composites` lists `(f, g, g . f)` for every composable pair of arrows,
    /// with `None` standing for an identity composite.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        composites: Vec<(usize, usize, Option<usize>)>,
    ) -> Result<Self, CategoryError> {
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= objects.len() || a.target >= objects.len() {
                return Err(CategoryError::UnknownObject(a.label.clone()));
            }
            outgoing[a.source].push(i);
        }
        let mut table = HashMap::with_capacity(composites.len());
        for (f, g, h) in composites {
            table.insert((f, g), h);
        }
        let cat = FiniteCategory { objects, arrows, composites: table, outgoing };
        cat.check_table()?;
        Ok(cat)
    }

    fn check_table(&self) -> Result<(), CategoryError> {
        let label = |i: usize| self.arrows[i].label.clone();
        for f in 0..self.arrows.len() {
            for &g in &self.outgoing[self.arrows[f].target] {
                let h =
                    self.composites.get(&(f, g)).ok_or_else(|| CategoryError::MissingComposite(label(f), label(g)))?;
                let (s, t) = (self.arrows[f].source, self.arrows[g].target);
                let ok = match h {
                    Some(h) => self.arrows[*h].source == s && self.arrows[*h].target == t,
                    None => s == t,
                };
                if !ok {
                    return Err(CategoryError::BadComposite(label(f), label(g)));
                }
            }
        }
        for f in 0..self.arrows.len() {
            for &g in &self.outgoing[self.arrows[f].target] {
                for &h in &self.outgoing[self.arrows[g].target] {
                    let left = self.then(self.then(Morphism::Arrow(f), Morphism::Arrow(g)), Morphism::Arrow(h));
                    let right = self.then(Morphism::Arrow(f), self.then(Morphism::Arrow(g), Morphism::Arrow(h)));
                    if left != right {
                        return Err(CategoryError::NotAssociative(label(f), label(g), label(h)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self, m: Morphism) -> usize {
        match m {
            Morphism::Identity(o) => o,
            Morphism::Arrow(a) => self.arrows[a].source,
        }
    }

    pub fn target(&self, m: Morphism) -> usize {
        match m {
            Morphism::Identity(o) => o,
            Morphism::Arrow(a) => self.arrows[a].target,
        }
    }

    /// `g . f`; panics unless `target(f) = source(g)`.
    pub fn then(&self, f: Morphism, g: Morphism) -> Morphism {
        assert_eq!(self.target(f), self.source(g), "morphisms are not composable");
        match (f, g) {
            (Morphism::Identity(_), g) => g,
            (f, Morphism::Identity(_)) => f,
            (Morphism::Arrow(a), Morphism::Arrow(b)) => match self.composites[&(a, b)] {
                Some(h) => Morphism::Arrow(h),
                None => Morphism::Identity(self.arrows[a].source),
            },
        }
    }

    /// `g . f` when it is a non-identity arrow; `None` for identities and non-composable pairs.
    pub fn composite(&self, f: usize, g: usize) -> Option<usize> {
        self.composites.get(&(f, g)).copied().flatten()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// Non-identity arrows leaving `o`.
    pub fn outgoing(&self, o: usize) -> &[usize] {
        &self.outgoing[o]
    }

    /// A description of the first violation of finite directedness, if any.
    pub fn directedness_violation(&self) -> Option<String> {
        let mut seen = HashSet::new();
        for a in &self.arrows {
            if a.source == a.target {
                return Some(format!("non-identity endomorphism `{}`", a.label));
            }
            seen.insert((a.source, a.target));
        }
        self.arrows.iter().find(|a| seen.contains(&(a.target, a.source))).map(|a| {
            format!("arrows in both directions between `{}` and `{}`", self.objects[a.source], self.objects[a.target])
        })
    }

    pub fn is_finite_directed(&self) -> bool {
        self.directedness_violation().is_none()
    }

    /// Composable strings of non-identity arrows, grouped by length `0..=max_len`
    /// (length 0 is left empty), each group sorted.
    pub fn composable_strings(&self, max_len: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_len + 1];
        if max_len == 0 {
            return out;
        }
        out[1] = (0..self.arrows.len()).map(|a| vec![a]).collect();
        for n in 2..=max_len {
            let mut next = Vec::new();
            for s in &out[n - 1] {
                let last = *s.last().expect("non-empty string");
                for &g in &self.outgoing[self.arrows[last].target] {
                    let mut t = s.clone();
                    t.push(g);
                    next.push(t);
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            out[n] = next;
        }
        out
    }
}
