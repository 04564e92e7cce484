use std::collections::HashMap;
use std::sync::Arc;

use super::error::RingError;

/// An immutable, ordered set of variable names.
///
/// The declared order is the canonical order used by the graded-lex term
/// order and by the text grammar. Names must start with a letter and may
/// continue with letters, digits, `_`, `:` and `-` (lattice variables are
/// spelled like `tau:4:0:-2`). `^`, `*`, `+` and whitespace are reserved by
/// the grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == ':' || c == '-')
}

impl VariableTable {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>, RingError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(RingError::BadTable("table must not be empty".into()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(RingError::BadTable(format!("invalid variable name `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(RingError::BadTable(format!("duplicate variable name `{name}`")));
            }
        }
        Ok(Arc::new(VariableTable { names, index }))
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// Two polynomials interoperate when they reference the same table value;
/// pointer equality is the fast path.
pub fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_is_a_bijection() {
        let t = VariableTable::new(["x4", "f0", "tau:2:1:-1", "t:0:0"]).unwrap();
        assert_eq!(t.arity(), 4);
        for i in 0..t.arity() {
            assert_eq!(t.index_of(t.name(i)), Some(i));
        }
        assert_eq!(t.index_of("missing"), None);
    }

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(VariableTable::new(["a", "a"]).is_err());
        assert!(VariableTable::new(["1x"]).is_err());
        assert!(VariableTable::new(["x^2"]).is_err());
        assert!(VariableTable::new(["-x"]).is_err());
        assert!(VariableTable::new(Vec::<String>::new()).is_err());
    }
}
