//! Extension signatures and formula factories.
//!
//! A factory is the core language plus a set of mathematical extensions
//! (datatypes, axiomatic types and operators). Two factories are compatible
//! when every extension they both know has an equal signature; operator
//! definitions never take part in that comparison.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ast::Type;
use crate::error::AstError;

/// Names the lexer reserves; extensions may not reuse them.
pub const RESERVED_WORDS: &[&str] = &["TRUE", "FALSE", "BOOL", "INT", "POW", "not", "or", "oftype", "ℤ", "ℙ"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    Prefix,
    Infix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaKind {
    Expression,
    Predicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorSig {
    pub name: String,
    pub notation: Notation,
    pub kind: FormulaKind,
    pub args: Vec<(String, Type)>,
    /// `None` for predicate operators.
    pub result: Option<Type>,
    pub associative: bool,
    pub commutative: bool,
    pub symbol: Option<String>,
}

impl OperatorSig {
    pub fn is_predicate(&self) -> bool {
        self.kind == FormulaKind::Predicate
    }

    /// The token used when printing in unicode mode.
    pub fn display_token(&self) -> &str {
        self.symbol.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructorSig {
    pub name: String,
    pub destructors: Vec<(String, Type)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DatatypeSig {
    pub name: String,
    pub type_params: Vec<String>,
    pub constructors: Vec<ConstructorSig>,
}

impl DatatypeSig {
    /// The type `Name(P1, …, Pn)` over the declared parameters.
    pub fn generic_type(&self) -> Type {
        Type::Datatype(self.name.clone(), self.type_params.iter().cloned().map(Type::Param).collect())
    }

    pub fn constructor(&self, name: &str) -> Option<&ConstructorSig> {
        self.constructors.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "extension", rename_all = "lowercase")]
pub enum ExtensionSignature {
    Datatype(DatatypeSig),
    AxiomaticType { name: String },
    Operator(OperatorSig),
}

impl ExtensionSignature {
    pub fn name(&self) -> &str {
        match self {
            ExtensionSignature::Datatype(d) => &d.name,
            ExtensionSignature::AxiomaticType { name } => name,
            ExtensionSignature::Operator(o) => &o.name,
        }
    }
}

/// Structural signature comparison. Order matters for constructors,
/// destructors and arguments; operator definitions are not part of a
/// signature and so never reach this function.
pub fn signature_equal(a: &ExtensionSignature, b: &ExtensionSignature) -> bool {
    match (a, b) {
        (ExtensionSignature::Datatype(x), ExtensionSignature::Datatype(y)) => {
            x.name == y.name && x.type_params == y.type_params && x.constructors == y.constructors
        }
        (ExtensionSignature::AxiomaticType { name: x }, ExtensionSignature::AxiomaticType { name: y }) => x == y,
        (ExtensionSignature::Operator(x), ExtensionSignature::Operator(y)) => {
            x.name == y.name
                && x.args == y.args
                && x.notation == y.notation
                && x.kind == y.kind
                && x.result == y.result
                && x.associative == y.associative
                && x.commutative == y.commutative
                && x.symbol == y.symbol
        }
        _ => false,
    }
}

/// What a name resolves to inside a factory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    Datatype(String),
    AxiomaticType(String),
    Operator(String),
    Constructor { datatype: String, index: usize },
    Destructor { datatype: String, constructor: usize, index: usize },
}

impl Symbol {
    fn owner(&self) -> &str {
        match self {
            Symbol::Datatype(n) | Symbol::AxiomaticType(n) | Symbol::Operator(n) => n,
            Symbol::Constructor { datatype, .. } | Symbol::Destructor { datatype, .. } => datatype,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoryId(pub u64);

impl fmt::Display for FactoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

pub struct FormulaFactory {
    id: FactoryId,
    extensions: BTreeMap<String, ExtensionSignature>,
    symbols: HashMap<String, Symbol>,
    /// Unicode symbol token → operator name.
    tokens: HashMap<String, String>,
}

impl fmt::Debug for FormulaFactory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormulaFactory")
            .field("id", &self.id)
            .field("extensions", &self.extensions.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl FormulaFactory {
    /// The factory of the bare core language.
    pub fn core() -> Arc<FormulaFactory> {
        static CORE: OnceLock<Arc<FormulaFactory>> = OnceLock::new();
        CORE.get_or_init(|| Arc::new(FormulaFactory::build(BTreeMap::new()).expect("empty factory is valid"))).clone()
    }

    pub fn new(extensions: impl IntoIterator<Item = ExtensionSignature>) -> Result<Arc<FormulaFactory>, AstError> {
        let mut map = BTreeMap::new();
        for ext in extensions {
            let name = ext.name().to_string();
            if let Some(previous) = map.get(&name) {
                if !signature_equal(previous, &ext) {
                    return Err(AstError::DuplicateExtension(name));
                }
                continue;
            }
            map.insert(name, ext);
        }
        Ok(Arc::new(FormulaFactory::build(map)?))
    }

    fn build(extensions: BTreeMap<String, ExtensionSignature>) -> Result<FormulaFactory, AstError> {
        let mut symbols = HashMap::new();
        let mut tokens = HashMap::new();
        let mut claim = |name: &str, sym: Symbol| -> Result<(), AstError> {
            if RESERVED_WORDS.contains(&name) {
                return Err(AstError::ReservedName(name.to_string()));
            }
            if symbols.insert(name.to_string(), sym).is_some() {
                return Err(AstError::DuplicateExtension(name.to_string()));
            }
            Ok(())
        };
        for ext in extensions.values() {
            match ext {
                ExtensionSignature::Datatype(d) => {
                    claim(&d.name, Symbol::Datatype(d.name.clone()))?;
                    for (ci, c) in d.constructors.iter().enumerate() {
                        claim(&c.name, Symbol::Constructor { datatype: d.name.clone(), index: ci })?;
                        for (di, (dname, _)) in c.destructors.iter().enumerate() {
                            claim(dname, Symbol::Destructor { datatype: d.name.clone(), constructor: ci, index: di })?;
                        }
                    }
                }
                ExtensionSignature::AxiomaticType { name } => {
                    claim(name, Symbol::AxiomaticType(name.clone()))?;
                }
                ExtensionSignature::Operator(op) => {
                    check_operator(op)?;
                    claim(&op.name, Symbol::Operator(op.name.clone()))?;
                    if let Some(sym) = &op.symbol {
                        if tokens.insert(sym.clone(), op.name.clone()).is_some() {
                            return Err(AstError::DuplicateExtension(sym.clone()));
                        }
                    }
                }
            }
        }
        let id = content_id(&extensions);
        Ok(FormulaFactory { id, extensions, symbols, tokens })
    }

    pub fn id(&self) -> FactoryId {
        self.id
    }

    pub fn is_core(&self) -> bool {
        self.extensions.is_empty()
    }

    pub fn extensions(&self) -> impl Iterator<Item = &ExtensionSignature> {
        self.extensions.values()
    }

    pub fn extension(&self, name: &str) -> Option<&ExtensionSignature> {
        self.extensions.get(name)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn operator(&self, name: &str) -> Option<&OperatorSig> {
        match self.extensions.get(name) {
            Some(ExtensionSignature::Operator(op)) => Some(op),
            _ => None,
        }
    }

    pub fn datatype(&self, name: &str) -> Option<&DatatypeSig> {
        match self.extensions.get(name) {
            Some(ExtensionSignature::Datatype(d)) => Some(d),
            _ => None,
        }
    }

    pub fn is_axiomatic_type(&self, name: &str) -> bool {
        matches!(self.extensions.get(name), Some(ExtensionSignature::AxiomaticType { .. }))
    }

    /// Constructor `name` together with its datatype.
    pub fn constructor(&self, name: &str) -> Option<(&DatatypeSig, &ConstructorSig)> {
        match self.symbols.get(name)? {
            Symbol::Constructor { datatype, index } => {
                let d = self.datatype(datatype)?;
                Some((d, &d.constructors[*index]))
            }
            _ => None,
        }
    }

    /// Destructor `name`: its datatype and declared field type.
    pub fn destructor(&self, name: &str) -> Option<(&DatatypeSig, &Type)> {
        match self.symbols.get(name)? {
            Symbol::Destructor { datatype, constructor, index } => {
                let d = self.datatype(datatype)?;
                Some((d, &d.constructors[*constructor].destructors[*index].1))
            }
            _ => None,
        }
    }

    /// Operator declared with the unicode token `tok`.
    pub fn operator_for_token(&self, tok: &str) -> Option<&OperatorSig> {
        self.tokens.get(tok).and_then(|n| self.operator(n))
    }

    pub fn symbol_tokens(&self) -> impl Iterator<Item = &str> {
        self.tokens.keys().map(String::as_str)
    }

    /// True when every extension of `self` is present in `other` with an
    /// equal signature.
    pub fn is_subset_of(&self, other: &FormulaFactory) -> bool {
        self.extensions.iter().all(|(name, sig)| other.extensions.get(name).is_some_and(|o| signature_equal(sig, o)))
    }
}

fn check_operator(op: &OperatorSig) -> Result<(), AstError> {
    let invalid = |reason: &str| AstError::InvalidSignature { name: op.name.clone(), reason: reason.to_string() };
    if op.notation == Notation::Infix && op.args.len() < 2 {
        return Err(invalid("infix notation needs two or more arguments"));
    }
    match (op.kind, &op.result) {
        (FormulaKind::Predicate, Some(_)) => return Err(invalid("predicate with a result type")),
        (FormulaKind::Expression, None) => return Err(invalid("expression without result type")),
        _ => {}
    }
    if op.associative {
        if op.notation != Notation::Infix {
            return Err(invalid("associative operators must be infix"));
        }
        if op.args.len() != 2 || op.args[0].1 != op.args[1].1 {
            return Err(invalid("associative operators take two arguments of one type"));
        }
        if op.result.as_ref() != Some(&op.args[0].1) {
            return Err(invalid("associative operator result must equal its argument type"));
        }
    }
    if op.commutative && op.args.len() != 2 {
        return Err(invalid("commutative operators take two arguments"));
    }
    if let Some(sym) = &op.symbol {
        if sym.is_empty() || sym.chars().any(|c| c.is_whitespace() || c.is_alphanumeric() || "(),{}".contains(c)) {
            return Err(invalid("symbols must be non-empty and free of letters, digits, spaces and brackets"));
        }
    }
    Ok(())
}

fn content_id(extensions: &BTreeMap<String, ExtensionSignature>) -> FactoryId {
    if extensions.is_empty() {
        return FactoryId(0);
    }
    let sigs: Vec<&ExtensionSignature> = extensions.values().collect();
    let bytes = serde_json::to_vec(&sigs).expect("signatures serialize");
    let digest = Sha256::digest(&bytes);
    let mut word = [0u8; 8];
    word.copy_from_slice(&digest[..8]);
    FactoryId(u64::from_be_bytes(word))
}

/// First name on which the two factories disagree, if any.
pub fn first_conflict(a: &FormulaFactory, b: &FormulaFactory) -> Option<String> {
    if a.id == b.id {
        return None;
    }
    for (name, sig) in &a.extensions {
        if let Some(other) = b.extensions.get(name) {
            if !signature_equal(sig, other) {
                return Some(name.clone());
            }
        }
    }
    // A constructor in one factory may share its name with an operator in
    // the other.
    for (name, sym) in &a.symbols {
        if let Some(other) = b.symbols.get(name) {
            if sym.owner() != other.owner() || std::mem::discriminant(sym) != std::mem::discriminant(other) {
                return Some(name.clone());
            }
        }
    }
    for (tok, op) in &a.tokens {
        if let Some(other) = b.tokens.get(tok) {
            if op != other {
                return Some(op.clone());
            }
        }
    }
    None
}

pub fn factories_compatible(a: &FormulaFactory, b: &FormulaFactory) -> bool {
    first_conflict(a, b).is_none()
}

/// Factory holding every extension of both inputs.
pub fn factory_union(a: &Arc<FormulaFactory>, b: &Arc<FormulaFactory>) -> Result<Arc<FormulaFactory>, AstError> {
    if a.id == b.id || b.is_subset_of(a) {
        return Ok(a.clone());
    }
    if a.is_subset_of(b) {
        return Ok(b.clone());
    }
    if let Some(name) = first_conflict(a, b) {
        return Err(AstError::IncompatibleFactories(name));
    }
    let mut map = a.extensions.clone();
    for (k, v) in &b.extensions {
        map.entry(k.clone()).or_insert_with(|| v.clone());
    }
    Ok(Arc::new(FormulaFactory::build(map)?))
}
