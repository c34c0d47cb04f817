//! Types and formulas.
//!
//! Every formula node carries the factory it was built with. Building a node
//! from children built with different factories unions those factories and
//! fails when they disagree on a shared extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AstError;
use crate::factory::{factory_union, FormulaFactory};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Type {
    Int,
    Bool,
    Param(String),
    Given(String),
    Power(Box<Type>),
    Product(Box<Type>, Box<Type>),
    Datatype(String, Vec<Type>),
}

impl Type {
    pub fn power(t: Type) -> Type {
        Type::Power(Box::new(t))
    }

    pub fn product(a: Type, b: Type) -> Type {
        Type::Product(Box::new(a), Box::new(b))
    }

    /// `A ↔ B`, i.e. `ℙ(A × B)`.
    pub fn relation(a: Type, b: Type) -> Type {
        Type::power(Type::product(a, b))
    }

    /// Element type of a set type.
    pub fn base(&self) -> Option<&Type> {
        match self {
            Type::Power(t) => Some(t),
            _ => None,
        }
    }

    /// Source and target of a relation type.
    pub fn relation_parts(&self) -> Option<(&Type, &Type)> {
        match self.base()? {
            Type::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut |t| {
            if let Type::Param(p) = t {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn has_params(&self) -> bool {
        !self.params().is_empty()
    }

    pub(crate) fn collect_names(&self, f: &mut impl FnMut(&Type)) {
        f(self);
        match self {
            Type::Power(t) => t.collect_names(f),
            Type::Product(a, b) => {
                a.collect_names(f);
                b.collect_names(f);
            }
            Type::Datatype(_, args) => args.iter().for_each(|a| a.collect_names(f)),
            _ => {}
        }
    }

    /// Structural map over the type's leaves and nodes, bottom-up.
    pub fn map(&self, f: &impl Fn(&Type) -> Option<Type>) -> Type {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Type::Power(t) => Type::power(t.map(f)),
            Type::Product(a, b) => Type::product(a.map(f), b.map(f)),
            Type::Datatype(n, args) => Type::Datatype(n.clone(), args.iter().map(|a| a.map(f)).collect()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => write!(f, "ℤ"),
            Type::Bool => write!(f, "BOOL"),
            Type::Param(n) | Type::Given(n) => write!(f, "{n}"),
            Type::Power(t) => write!(f, "ℙ({t})"),
            Type::Product(a, b) => {
                write!(f, "{a} × ")?;
                if matches!(**b, Type::Product(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Type::Datatype(n, args) if args.is_empty() => write!(f, "{n}"),
            Type::Datatype(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A quantified identifier. The type is filled in by the type checker or
/// given explicitly with `x ⦂ T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub ty: Option<Type>,
}

impl Binder {
    pub fn new(name: impl Into<String>) -> Self {
        Binder { name: name.into(), ty: None }
    }

    pub fn typed(name: impl Into<String>, ty: Type) -> Self {
        Binder { name: name.into(), ty: Some(ty) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    // predicates
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Forall(Vec<Binder>),
    Exists(Vec<Binder>),
    Equal,
    NotEqual,
    In,
    Subset,
    // expressions
    Ident(String),
    Int(i64),
    Bool(bool),
    /// The carrier set of a type, e.g. `ℤ`, `Real` or `List(ℤ)`.
    TypeSet(Type),
    Empty,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Range,
    Maplet,
    SetExt,
    Pow,
    CProd,
    Union,
    Inter,
    /// Forward relational composition `;`.
    Comp,
    /// Extension operator application.
    Apply(String),
    Construct(String),
    Destruct(String),
}

impl Kind {
    pub fn tag(&self) -> &'static str {
        match self {
            Kind::True => "true",
            Kind::False => "false",
            Kind::Not => "not",
            Kind::And => "and",
            Kind::Or => "or",
            Kind::Implies => "imp",
            Kind::Equiv => "equiv",
            Kind::Forall(_) => "forall",
            Kind::Exists(_) => "exists",
            Kind::Equal => "eq",
            Kind::NotEqual => "neq",
            Kind::In => "in",
            Kind::Subset => "subset",
            Kind::Ident(_) => "id",
            Kind::Int(_) => "int",
            Kind::Bool(_) => "bool",
            Kind::TypeSet(_) => "typeset",
            Kind::Empty => "empty",
            Kind::Add => "add",
            Kind::Sub => "sub",
            Kind::Mul => "mul",
            Kind::Div => "div",
            Kind::Neg => "neg",
            Kind::Range => "range",
            Kind::Maplet => "maplet",
            Kind::SetExt => "setext",
            Kind::Pow => "pow",
            Kind::CProd => "cprod",
            Kind::Union => "union",
            Kind::Inter => "inter",
            Kind::Comp => "comp",
            Kind::Apply(_) => "op",
            Kind::Construct(_) => "cons",
            Kind::Destruct(_) => "dest",
        }
    }

    pub fn binders(&self) -> Option<&[Binder]> {
        match self {
            Kind::Forall(b) | Kind::Exists(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Kind::Forall(_) | Kind::Exists(_))
    }

    /// Whether nodes of this kind are predicates. Extension applications
    /// consult the factory.
    pub fn is_predicate_in(&self, ff: &FormulaFactory) -> bool {
        match self {
            Kind::True
            | Kind::False
            | Kind::Not
            | Kind::And
            | Kind::Or
            | Kind::Implies
            | Kind::Equiv
            | Kind::Forall(_)
            | Kind::Exists(_)
            | Kind::Equal
            | Kind::NotEqual
            | Kind::In
            | Kind::Subset => true,
            Kind::Apply(op) => ff.operator(op).is_some_and(|o| o.is_predicate()),
            _ => false,
        }
    }

    /// Associative kinds are stored flattened with two or more operands.
    pub fn is_associative_in(&self, ff: &FormulaFactory) -> bool {
        match self {
            Kind::And | Kind::Or | Kind::Comp => true,
            Kind::Apply(op) => ff.operator(op).is_some_and(|o| o.associative),
            _ => false,
        }
    }

    fn children_are_predicates(&self) -> bool {
        matches!(
            self,
            Kind::Not | Kind::And | Kind::Or | Kind::Implies | Kind::Equiv | Kind::Forall(_) | Kind::Exists(_)
        )
    }
}

/// Path of child indices from a formula's root. Quantifier bodies are
/// child 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|_| format!("bad position `{s}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Node {
    kind: Kind,
    children: Vec<Formula>,
    ty: Option<Type>,
    factory: Arc<FormulaFactory>,
}

/// An immutable predicate or expression.
///
/// Equality and hashing are structural and ignore factories.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind && self.0.ty == other.0.ty && self.0.children == other.0.children)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
        self.0.ty.hash(state);
        self.0.children.hash(state);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::lang::print_formula(self, crate::lang::PrintMode::Unicode))
    }
}

fn expected_arity(kind: &Kind, ff: &FormulaFactory) -> Result<(usize, Option<usize>), AstError> {
    // (min, max); None = unbounded
    Ok(match kind {
        Kind::True | Kind::False | Kind::Ident(_) | Kind::Int(_) | Kind::Bool(_) | Kind::TypeSet(_) | Kind::Empty => {
            (0, Some(0))
        }
        Kind::Not | Kind::Neg | Kind::Pow | Kind::Forall(_) | Kind::Exists(_) | Kind::Destruct(_) => (1, Some(1)),
        Kind::Implies
        | Kind::Equiv
        | Kind::Equal
        | Kind::NotEqual
        | Kind::In
        | Kind::Subset
        | Kind::Add
        | Kind::Sub
        | Kind::Mul
        | Kind::Div
        | Kind::Range
        | Kind::Maplet
        | Kind::CProd
        | Kind::Union
        | Kind::Inter => (2, Some(2)),
        Kind::And | Kind::Or | Kind::Comp => (2, None),
        Kind::SetExt => (1, None),
        Kind::Apply(name) => {
            let op = ff.operator(name).ok_or_else(|| AstError::UnknownExtension(name.clone()))?;
            if op.associative {
                (2, None)
            } else {
                (op.args.len(), Some(op.args.len()))
            }
        }
        Kind::Construct(name) => {
            let (_, c) = ff.constructor(name).ok_or_else(|| AstError::UnknownExtension(name.clone()))?;
            (c.destructors.len(), Some(c.destructors.len()))
        }
    })
}

impl Formula {
    /// Builds a node, checking factory compatibility, arity and operand
    /// kinds. `ambient` is the factory the caller builds with; the node's
    /// factory is the union of `ambient` and every child's factory.
    ///
    /// Associative operators are flattened, and `ℙ`/`×` over type sets are
    /// folded into a single type set.
    pub fn build(
        ambient: &Arc<FormulaFactory>,
        kind: Kind,
        children: Vec<Formula>,
        ty: Option<Type>,
    ) -> Result<Formula, AstError> {
        let mut factory = ambient.clone();
        for c in &children {
            if c.0.factory.id() != factory.id() {
                factory = factory_union(&factory, &c.0.factory)?;
            }
        }
        let node_name = || kind.tag().to_string();

        let children = if kind.is_associative_in(&factory) {
            let mut flat = Vec::with_capacity(children.len());
            for c in children {
                if c.0.kind == kind {
                    flat.extend(c.0.children.iter().cloned());
                } else {
                    flat.push(c);
                }
            }
            flat
        } else {
            children
        };

        let (min, max) = expected_arity(&kind, &factory)?;
        if children.len() < min || max.is_some_and(|m| children.len() > m) {
            return Err(AstError::ArityMismatch {
                node: node_name(),
                expected: match max {
                    Some(m) if m == min => m.to_string(),
                    Some(m) => format!("{min}..{m}"),
                    None => format!("{min} or more"),
                },
                found: children.len(),
            });
        }
        let want_pred = kind.children_are_predicates();
        for (i, c) in children.iter().enumerate() {
            if c.is_predicate() != want_pred {
                return Err(AstError::KindMismatch {
                    node: node_name(),
                    index: i,
                    expected: if want_pred { "a predicate" } else { "an expression" },
                });
            }
        }
        if let Kind::Destruct(name) = &kind {
            if factory.destructor(name).is_none() {
                return Err(AstError::UnknownExtension(name.clone()));
            }
        }
        let is_pred = kind.is_predicate_in(&factory);
        let ty = if is_pred { None } else { ty };

        match (&kind, children.as_slice()) {
            (Kind::Pow, [c]) => {
                if let Kind::TypeSet(t) = c.kind() {
                    let t = Type::power(t.clone());
                    return Ok(Formula::leaf(factory, Kind::TypeSet(t.clone()), Some(Type::power(t))));
                }
            }
            (Kind::CProd, [a, b]) => {
                if let (Kind::TypeSet(x), Kind::TypeSet(y)) = (a.kind(), b.kind()) {
                    let t = Type::product(x.clone(), y.clone());
                    return Ok(Formula::leaf(factory, Kind::TypeSet(t.clone()), Some(Type::power(t))));
                }
            }
            _ => {}
        }
        Ok(Formula(Arc::new(Node { kind, children, ty, factory })))
    }

    fn leaf(factory: Arc<FormulaFactory>, kind: Kind, ty: Option<Type>) -> Formula {
        Formula(Arc::new(Node { kind, children: Vec::new(), ty, factory }))
    }

    pub fn truth(ff: &Arc<FormulaFactory>) -> Formula {
        Formula::leaf(ff.clone(), Kind::True, None)
    }

    pub fn falsity(ff: &Arc<FormulaFactory>) -> Formula {
        Formula::leaf(ff.clone(), Kind::False, None)
    }

    pub fn ident(ff: &Arc<FormulaFactory>, name: impl Into<String>, ty: Option<Type>) -> Formula {
        Formula::leaf(ff.clone(), Kind::Ident(name.into()), ty)
    }

    pub fn int(ff: &Arc<FormulaFactory>, value: i64) -> Formula {
        Formula::leaf(ff.clone(), Kind::Int(value), Some(Type::Int))
    }

    /// The carrier set of `t`, typed `ℙ(t)`.
    pub fn type_set(ff: &Arc<FormulaFactory>, t: Type) -> Formula {
        Formula::leaf(ff.clone(), Kind::TypeSet(t.clone()), Some(Type::power(t)))
    }

    /// Conjunction of `parts`: `⊤` when empty, the sole element when single.
    pub fn conj(ff: &Arc<FormulaFactory>, parts: Vec<Formula>) -> Result<Formula, AstError> {
        match parts.len() {
            0 => Ok(Formula::truth(ff)),
            1 => Ok(parts.into_iter().next().unwrap()),
            _ => Formula::build(ff, Kind::And, parts, None),
        }
    }

    /// Disjunction of `parts`: `⊥` when empty.
    pub fn disj(ff: &Arc<FormulaFactory>, parts: Vec<Formula>) -> Result<Formula, AstError> {
        match parts.len() {
            0 => Ok(Formula::falsity(ff)),
            1 => Ok(parts.into_iter().next().unwrap()),
            _ => Formula::build(ff, Kind::Or, parts, None),
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn children(&self) -> &[Formula] {
        &self.0.children
    }

    pub fn child(&self, i: usize) -> Option<&Formula> {
        self.0.children.get(i)
    }

    pub fn ty(&self) -> Option<&Type> {
        self.0.ty.as_ref()
    }

    pub fn factory(&self) -> &Arc<FormulaFactory> {
        &self.0.factory
    }

    pub fn is_predicate(&self) -> bool {
        self.0.kind.is_predicate_in(&self.0.factory)
    }

    pub fn is_true(&self) -> bool {
        self.0.kind == Kind::True
    }

    pub fn ident_name(&self) -> Option<&str> {
        match &self.0.kind {
            Kind::Ident(n) => Some(n),
            _ => None,
        }
    }

    /// Same node with a different type annotation.
    pub fn with_type(&self, ty: Option<Type>) -> Formula {
        if self.is_predicate() {
            return self.clone();
        }
        Formula(Arc::new(Node {
            kind: self.0.kind.clone(),
            children: self.0.children.clone(),
            ty,
            factory: self.0.factory.clone(),
        }))
    }

    /// Rebuilds this node over new children, keeping kind, type and
    /// factory.
    pub fn rebuild(&self, children: Vec<Formula>) -> Result<Formula, AstError> {
        Formula::build(&self.0.factory, self.0.kind.clone(), children, self.0.ty.clone())
    }

    /// True when every expression node carries a type.
    pub fn is_typed(&self) -> bool {
        (self.is_predicate() || self.0.ty.is_some())
            && self.0.kind.binders().is_none_or(|bs| bs.iter().all(|b| b.ty.is_some()))
            && self.0.children.iter().all(Formula::is_typed)
    }

    pub fn at(&self, pos: &Position) -> Option<&Formula> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = cur.child(i)?;
        }
        Some(cur)
    }

    /// Replaces the sub-formula at `pos`.
    pub fn replace_at(&self, pos: &Position, new: Formula) -> Result<Formula, AstError> {
        self.replace_rec(&pos.0, new).map_err(|e| match e {
            AstError::InvalidPosition(_) => AstError::InvalidPosition(pos.clone()),
            other => other,
        })
    }

    fn replace_rec(&self, path: &[usize], new: Formula) -> Result<Formula, AstError> {
        match path.split_first() {
            None => Ok(new),
            Some((&i, rest)) => {
                let child = self.child(i).ok_or_else(|| AstError::InvalidPosition(Position::root()))?;
                let replaced = child.replace_rec(rest, new)?;
                let mut children = self.0.children.clone();
                children[i] = replaced;
                self.rebuild(children)
            }
        }
    }

    /// Every position in pre-order (leftmost-outermost first).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.positions_rec(&mut Vec::new(), &mut out);
        out
    }

    fn positions_rec(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        for (i, c) in self.0.children.iter().enumerate() {
            path.push(i);
            c.positions_rec(path, out);
            path.pop();
        }
    }

    /// Binders enclosing `pos`, outermost first.
    pub fn binders_above(&self, pos: &Position) -> Vec<Binder> {
        let mut out = Vec::new();
        let mut cur = self;
        for &i in &pos.0 {
            if let Some(bs) = cur.kind().binders() {
                out.extend(bs.iter().cloned());
            }
            match cur.child(i) {
                Some(c) => cur = c,
                None => break,
            }
        }
        out
    }

    /// Free identifiers with the type of their first occurrence.
    pub fn free_idents(&self) -> BTreeMap<String, Option<Type>> {
        let mut out = BTreeMap::new();
        self.free_rec(&mut Vec::new(), &mut out);
        out
    }

    fn free_rec(&self, bound: &mut Vec<String>, out: &mut BTreeMap<String, Option<Type>>) {
        match &self.0.kind {
            Kind::Ident(n) => {
                if !bound.contains(n) {
                    out.entry(n.clone()).or_insert_with(|| self.0.ty.clone());
                }
            }
            Kind::Forall(bs) | Kind::Exists(bs) => {
                let mark = bound.len();
                bound.extend(bs.iter().map(|b| b.name.clone()));
                for c in &self.0.children {
                    c.free_rec(bound, out);
                }
                bound.truncate(mark);
            }
            _ => {
                for c in &self.0.children {
                    c.free_rec(bound, out);
                }
            }
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        self.free_idents().contains_key(name)
    }

    /// Every identifier name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f.kind() {
            Kind::Ident(n) => {
                out.insert(n.clone());
            }
            Kind::Forall(bs) | Kind::Exists(bs) => {
                out.extend(bs.iter().map(|b| b.name.clone()));
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in &self.0.children {
            c.visit(f);
        }
    }

    /// Every type mentioned by the formula: node types, binder types and
    /// type-set payloads.
    pub fn types(&self) -> Vec<Type> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Some(t) = f.ty() {
                out.push(t.clone());
            }
            match f.kind() {
                Kind::TypeSet(t) => out.push(t.clone()),
                Kind::Forall(bs) | Kind::Exists(bs) => out.extend(bs.iter().filter_map(|b| b.ty.clone())),
                _ => {}
            }
        });
        out
    }

    /// Names of the extensions this formula actually uses.
    pub fn used_extensions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let ff = self.factory().clone();
        let mut note = |name: &str| {
            let owner = match ff.symbol(name) {
                Some(crate::factory::Symbol::Constructor { datatype, .. })
                | Some(crate::factory::Symbol::Destructor { datatype, .. }) => datatype.clone(),
                Some(_) => name.to_string(),
                None => return,
            };
            out.insert(owner);
        };
        self.visit(&mut |f| match f.kind() {
            Kind::Apply(n) | Kind::Construct(n) | Kind::Destruct(n) => note(n),
            _ => {}
        });
        for t in self.types() {
            t.collect_names(&mut |t| match t {
                Type::Datatype(n, _) | Type::Given(n) => note(n),
                _ => {}
            });
        }
        out
    }
}
