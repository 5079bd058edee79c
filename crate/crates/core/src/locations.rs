//! Location-addressed objects.
//!
//! Definitions may live at a path such as `/a[3]` instead of in the flat
//! program. Concrete objects are found by key lookup, one map probe per path
//! segment, rather than by scanning definitions. A located definition whose
//! path carries a pattern index (`/a[x+2]`) is a class: concrete objects are
//! instantiated from it lazily, the first time a call addresses a path it
//! matches.
//!
//! Objects nest: every node owns a table of children, so `/a/b[1]` is the
//! child `b[1]` of `/a`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::ast::{
    match_pattern, Binding, Clause, Definition, Ident, LocationPath, Origin, Pattern, Program,
    QuantKind, Quantifier, SegmentKey, SubstError,
};
use crate::eval::{Budget, Counters, EvalError, Machine};
use crate::ast::Constant;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObjectNode {
    pub defs: Program,
    pub children: BTreeMap<SegmentKey, ObjectNode>,
}

impl ObjectNode {
    pub fn new(defs: Program) -> Self {
        ObjectNode {
            defs,
            children: BTreeMap::new(),
        }
    }
}

/// A pattern-addressed located definition, `pforall x. at /a[x+2]: ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub path: LocationPath,
    pub quantifier: Quantifier,
    pub clause: Clause,
}

impl ClassEntry {
    pub fn kind(&self) -> QuantKind {
        self.quantifier.kind()
    }

    /// Matches a concrete path segment by segment.
    pub fn match_path(&self, path: &LocationPath) -> Option<Binding> {
        if self.path.segments.len() != path.segments.len() {
            return None;
        }
        let mut binding = Binding::new();
        for (pat, seg) in self.path.segments.iter().zip(&path.segments) {
            if pat.name != seg.name {
                return None;
            }
            match (&pat.index, &seg.index) {
                (None, None) => {}
                (Some(p), Some(Pattern::Lit(c))) => binding.extend(match_pattern(p, c)?),
                _ => return None,
            }
        }
        Some(binding)
    }

    /// The definition an instance at a matched path holds.
    pub fn instance_definition(&self, binding: &Binding) -> Result<Definition, SubstError> {
        let def = Definition {
            quantifier: self.quantifier.clone(),
            clause: self.clause.clone(),
            origin: Origin::ClassInstance {
                parallel: self.kind() == QuantKind::Parallel,
            },
        };
        def.instantiate(binding)
    }
}

/// Result of instantiating a class at a path.
#[derive(Debug)]
pub enum Instance {
    /// A `pforall` class: the node now lives in the store.
    Stored,
    /// The path already resolved; nothing changed.
    Existing,
    /// A `forall` class: the node exists only for the current call.
    Transient(ObjectNode),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ObjectStore {
    roots: BTreeMap<SegmentKey, ObjectNode>,
    classes: Vec<ClassEntry>,
}

impl ObjectStore {
    pub fn new() -> Self {
        ObjectStore::default()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty() && self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn roots(&self) -> &BTreeMap<SegmentKey, ObjectNode> {
        &self.roots
    }

    pub fn add_class(&mut self, entry: ClassEntry) {
        self.classes.push(entry);
    }

    /// Appends a definition to the object at a concrete path, creating the
    /// object and any missing parents.
    ///
    /// Panics if the path is not concrete.
    pub fn add_definition(&mut self, path: &LocationPath, def: Definition) {
        let keys = path.keys().expect("concrete path");
        self.node_entry(&keys).defs.push(def);
    }

    fn node_entry(&mut self, keys: &[SegmentKey]) -> &mut ObjectNode {
        let (first, rest) = keys.split_first().expect("nonempty path");
        let mut node = self.roots.entry(first.clone()).or_default();
        for key in rest {
            node = node.children.entry(key.clone()).or_default();
        }
        node
    }

    /// Direct lookup of a concrete path. Never instantiates.
    pub fn resolve(&self, path: &LocationPath) -> Option<&ObjectNode> {
        let keys = path.keys()?;
        let (first, rest) = keys.split_first()?;
        rest.iter()
            .try_fold(self.roots.get(first)?, |node, key| node.children.get(key))
    }

    pub fn resolve_mut(&mut self, path: &LocationPath) -> Option<&mut ObjectNode> {
        let keys = path.keys()?;
        let (first, rest) = keys.split_first()?;
        let mut node = self.roots.get_mut(first)?;
        for key in rest {
            node = node.children.get_mut(key)?;
        }
        Some(node)
    }

    /// First class entry, in source order, matching the concrete path.
    pub fn match_class(&self, path: &LocationPath) -> Option<(usize, &ClassEntry, Binding)> {
        self.classes
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.match_path(path).map(|b| (i, c, b)))
    }

    /// Creates the object for a matched class at `path`. Stored classes
    /// are idempotent: a second call for the same path changes nothing.
    pub fn instantiate(
        &mut self,
        class_index: usize,
        binding: &Binding,
        path: &LocationPath,
    ) -> Result<Instance, SubstError> {
        let entry = &self.classes[class_index];
        let keys = path.keys().expect("concrete path");
        let def = entry.instance_definition(binding)?;
        let node = ObjectNode::new(Program::from_iter([def]));
        if entry.kind() != QuantKind::Parallel {
            return Ok(Instance::Transient(node));
        }
        if self.resolve(path).is_some() {
            return Ok(Instance::Existing);
        }
        let slot = self.node_entry(&keys);
        *slot = ObjectNode {
            defs: node.defs,
            children: std::mem::take(&mut slot.children),
        };
        Ok(Instance::Stored)
    }

    /// Every object path, including implicit parents, in lexicographic
    /// segment order.
    pub fn paths(&self) -> Vec<LocationPath> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        walk(&self.roots, &mut prefix, &mut |keys, _| {
            out.push(LocationPath::from_keys(keys))
        });
        out
    }

    /// Same store with quantified definitions and classes rewritten to
    /// `kind`, optionally restricted to the given heads.
    pub fn force_kind(&self, kind: QuantKind, only: Option<&BTreeSet<Ident>>) -> ObjectStore {
        fn rewrite(
            nodes: &BTreeMap<SegmentKey, ObjectNode>,
            kind: QuantKind,
            only: Option<&BTreeSet<Ident>>,
        ) -> BTreeMap<SegmentKey, ObjectNode> {
            nodes
                .iter()
                .map(|(k, n)| {
                    let node = ObjectNode {
                        defs: n.defs.force_kind(kind, only),
                        children: rewrite(&n.children, kind, only),
                    };
                    (k.clone(), node)
                })
                .collect()
        }
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let selected = only.is_none_or(|names| names.contains(&c.clause.head));
                ClassEntry {
                    quantifier: if selected {
                        c.quantifier.with_kind(kind)
                    } else {
                        c.quantifier.clone()
                    },
                    ..c.clone()
                }
            })
            .collect();
        ObjectStore {
            roots: rewrite(&self.roots, kind, only),
            classes,
        }
    }

    /// Human-readable listing: one `at <path>:` block per object that holds
    /// definitions, then the classes.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut prefix = Vec::new();
        walk(&self.roots, &mut prefix, &mut |keys, node| {
            if node.defs.is_empty() {
                return;
            }
            let _ = writeln!(out, "at {}:", LocationPath::from_keys(keys));
            for def in node.defs.iter() {
                let _ = writeln!(out, "  {def}");
            }
        });
        for class in &self.classes {
            let _ = writeln!(out, "{}", located_line(&class.quantifier, &class.path, &class.clause));
        }
        out
    }

    /// Parseable form: one `at <path>: ...;` line per located definition.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        let mut prefix = Vec::new();
        walk(&self.roots, &mut prefix, &mut |keys, node| {
            let path = LocationPath::from_keys(keys);
            for def in node.defs.iter() {
                let _ = writeln!(out, "{}", located_line(&def.quantifier, &path, &def.clause));
            }
        });
        for class in &self.classes {
            let _ = writeln!(out, "{}", located_line(&class.quantifier, &class.path, &class.clause));
        }
        out
    }
}

fn located_line(q: &Quantifier, path: &LocationPath, clause: &Clause) -> String {
    format!("{q}at {path}: {clause}")
}

fn walk<'a>(
    nodes: &'a BTreeMap<SegmentKey, ObjectNode>,
    prefix: &mut Vec<SegmentKey>,
    visit: &mut dyn FnMut(&[SegmentKey], &'a ObjectNode),
) {
    for (key, node) in nodes {
        prefix.push(key.clone());
        visit(prefix, node);
        walk(&node.children, prefix, visit);
        prefix.pop();
    }
}

/// Evaluates `path.head(args)` against a store, instantiating objects as
/// needed, and returns the value with the evolved store.
pub fn eval_located_call(
    store: ObjectStore,
    path: &LocationPath,
    head: &str,
    args: &[Constant],
    budget: Budget,
) -> Result<(Constant, ObjectStore, Counters), EvalError> {
    let mut machine = Machine::new(Program::new(), store, budget);
    let value = machine.located_call(path, head, args)?;
    let (_, store, counters) = machine.into_parts();
    Ok((value, store, counters))
}
