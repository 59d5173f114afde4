//! Variable interning shared by every symbolic layer.
//!
//! A [`VarSpace`] is built deterministically by the pipeline (model symbols
//! first, then jets and auxiliary symbols in a fixed order), so numeric ids
//! double as a canonical variable precedence.

use std::collections::BTreeMap;
use std::fmt;

/// Index of an interned variable inside a [`VarSpace`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub u32);

impl VarId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// What role a variable plays in the model or in derived computations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VarKind {
    State,
    Param,
    Input,
    Output,
    /// Jet variable `y_j^{(order)}` of an output.
    OutJet { output: usize, order: usize },
    /// Jet variable `u_k^{(order)}` of an input (order >= 1; order 0 is the input itself).
    InJet { input: usize, order: usize },
    /// Duplicate/tilde copy of a parameter, used by membership and specialization.
    TildeParam { param: usize },
    /// Symbol standing for a generator of the identifiable field.
    BetaSym { gen: usize },
    /// Symbol standing for a formal algebraic root.
    ThetaSym { ext: usize },
    /// Fresh state of a reparametrized or reduced model.
    NewState { idx: usize },
    /// Throwaway helper (saturation variables and the like).
    Aux,
}

/// Append-only name table. Ids are assigned in insertion order.
#[derive(Clone, Debug, Default)]
pub struct VarSpace {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    by_name: BTreeMap<String, VarId>,
}

impl VarSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`; returns an error message if the name is already taken.
    pub fn intern(&mut self, name: &str, kind: VarKind) -> Result<VarId, String> {
        if self.by_name.contains_key(name) {
            return Err(format!("duplicate identifier `{name}`"));
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.kinds.push(kind);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Interns `name`, appending primes until it is fresh. Used for generated symbols.
    pub fn intern_fresh(&mut self, base: &str, kind: VarKind) -> VarId {
        let mut name = base.to_string();
        while self.by_name.contains_key(&name) {
            name.push('_');
        }
        self.intern(&name, kind).expect("freshened name")
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.idx()]
    }

    pub fn kind(&self, id: VarId) -> &VarKind {
        &self.kinds[id.idx()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len() as u32).map(VarId)
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in self.ids() {
            writeln!(f, "{} -> {:?}", self.name(id), self.kind(id))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_assigns_sequential_ids() {
        let mut vs = VarSpace::new();
        let a = vs.intern("a", VarKind::Param).unwrap();
        let b = vs.intern("b", VarKind::Param).unwrap();
        assert_eq!(a, VarId(0));
        assert_eq!(b, VarId(1));
        assert_eq!(vs.lookup("a"), Some(a));
        assert!(vs.intern("a", VarKind::State).is_err());
    }

    #[test]
    fn fresh_names_never_collide() {
        let mut vs = VarSpace::new();
        vs.intern("t", VarKind::Aux).unwrap();
        let t2 = vs.intern_fresh("t", VarKind::Aux);
        assert_ne!(vs.name(t2), "t");
    }
}
