use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use super::validate::{check, Diagnostic};
use super::{Applicability, Axiom, Definition, RewriteCase, Theory};
use crate::ast::{Binder, Formula, Kind, Type};
use crate::error::{AstError, SpecialisationError};
use crate::factory::{factory_union, ExtensionSignature, FormulaFactory, OperatorSig};
use crate::matcher::match_type;
use crate::typing::{specialise, typecheck, Specialisation, TypeEnvironment};

/// Cases of an inductive definition by constructor: bound names and body.
pub(super) type InductiveCases = BTreeMap<String, (Vec<String>, Formula)>;

/// Typed items collected while validating.
#[derive(Default)]
pub(super) struct Typed {
    pub direct: BTreeMap<String, Formula>,
    pub inductive: BTreeMap<String, (usize, InductiveCases)>,
    pub wd: BTreeMap<String, Formula>,
    /// `[lhs, condition₁, rhs₁, condition₂, rhs₂, …]`
    pub rewrites: BTreeMap<String, Vec<Formula>>,
    /// `[given₁, …, givenₙ, infer]`
    pub inferences: BTreeMap<String, Vec<Formula>>,
    pub axioms: BTreeMap<String, Formula>,
}

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("theory `{name}` is invalid: {}", .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { name: String, diagnostics: Vec<Diagnostic> },
    #[error(transparent)]
    Ast(#[from] AstError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("`{0}` cannot be expanded")]
    NotExpandable(String),
    #[error(transparent)]
    Specialisation(#[from] SpecialisationError),
}

#[derive(Clone, Debug)]
pub enum CompiledDefinition {
    Direct(Formula),
    Inductive { scrutinee: usize, cases: InductiveCases },
    Axiomatic,
}

#[derive(Clone, Debug)]
pub struct CompiledOperator {
    pub sig: OperatorSig,
    pub theory: String,
    pub type_params: BTreeSet<String>,
    pub definition: CompiledDefinition,
    pub wd: Option<Formula>,
}

#[derive(Clone, Debug)]
pub struct CompiledRewrite {
    pub name: String,
    pub theory: String,
    pub type_params: BTreeSet<String>,
    pub vars: BTreeMap<String, Type>,
    pub lhs: Formula,
    pub cases: Vec<RewriteCase>,
    pub complete: bool,
    pub automatic: bool,
}

#[derive(Clone, Debug)]
pub struct CompiledInference {
    pub name: String,
    pub theory: String,
    pub type_params: BTreeSet<String>,
    pub vars: BTreeMap<String, Type>,
    pub givens: Vec<Formula>,
    pub infer: Formula,
    pub applicability: Applicability,
    pub automatic: bool,
}

/// A validated theory with every formula typed, ready for the prover.
#[derive(Clone, Debug)]
pub struct CompiledTheory {
    pub name: String,
    pub type_params: Vec<String>,
    pub factory: Arc<FormulaFactory>,
    pub operators: Vec<CompiledOperator>,
    pub rewrite_rules: Vec<CompiledRewrite>,
    pub inference_rules: Vec<CompiledInference>,
    /// Generated axioms first, then the theory's own.
    pub axioms: Vec<Axiom>,
}

/// The extensions a theory declares, in declaration order.
pub fn theory_extensions(t: &Theory) -> Vec<ExtensionSignature> {
    let mut out: Vec<ExtensionSignature> =
        t.axiomatic_types.iter().map(|n| ExtensionSignature::AxiomaticType { name: n.clone() }).collect();
    out.extend(t.datatypes.iter().cloned().map(ExtensionSignature::Datatype));
    out.extend(t.operators.iter().map(|o| ExtensionSignature::Operator(o.sig.clone())));
    out
}

/// The union of `imports` extended with the theory's own signatures.
pub fn compile_factory(t: &Theory, imports: &[Arc<FormulaFactory>]) -> Result<Arc<FormulaFactory>, AstError> {
    let mut base = FormulaFactory::core();
    for f in imports {
        base = factory_union(&base, f)?;
    }
    let own = theory_extensions(t);
    if own.is_empty() {
        return Ok(base);
    }
    for ext in &own {
        if base.extension(ext.name()).is_some() {
            return Err(AstError::DuplicateExtension(ext.name().to_string()));
        }
    }
    FormulaFactory::new(base.extensions().cloned().chain(own))
}

/// The non-emptiness and maximality axioms of each axiomatic type, followed
/// by the theory's own axioms.
pub fn generated_axioms(t: &Theory) -> Vec<Axiom> {
    let mut out = Vec::new();
    for s in &t.axiomatic_types {
        let ff = FormulaFactory::new([ExtensionSignature::AxiomaticType { name: s.clone() }])
            .expect("a single axiomatic type is a valid factory");
        let ty = Type::Given(s.clone());
        let set = Formula::type_set(&ff, ty.clone());
        let empty = Formula::build(&ff, Kind::Empty, Vec::new(), Some(Type::power(ty.clone()))).expect("leaf");
        let non_empty = Formula::build(&ff, Kind::NotEqual, vec![set.clone(), empty], None).expect("binary");
        let x = Formula::ident(&ff, "x", Some(ty.clone()));
        let member = Formula::build(&ff, Kind::In, vec![x, set], None).expect("binary");
        let maximal =
            Formula::build(&ff, Kind::Forall(vec![Binder::typed("x", ty)]), vec![member], None).expect("quantifier");
        out.push(Axiom { name: format!("{s}.non_emptiness"), predicate: non_empty });
        out.push(Axiom { name: format!("{s}.maximality"), predicate: maximal });
    }
    let env = TypeEnvironment { type_params: t.type_params.iter().cloned().collect(), ..Default::default() };
    for a in &t.axioms {
        let predicate = typecheck(&a.predicate, &env).unwrap_or_else(|_| a.predicate.clone());
        out.push(Axiom { name: a.name.clone(), predicate });
    }
    out
}

/// Validates and compiles a theory against the factories of its imports.
pub fn compile(t: &Theory, imports: &[Arc<FormulaFactory>]) -> Result<CompiledTheory, TheoryError> {
    let (diagnostics, mut typed) = check(t);
    if !diagnostics.is_empty() {
        return Err(TheoryError::Invalid { name: t.name.clone(), diagnostics });
    }
    let factory = compile_factory(t, imports)?;
    let params: BTreeSet<String> = t.type_params.iter().cloned().collect();

    let operators = t
        .operators
        .iter()
        .map(|o| {
            let name = &o.sig.name;
            let definition = match &o.definition {
                Definition::Direct(_) => CompiledDefinition::Direct(typed.direct.remove(name).expect("validated")),
                Definition::Inductive { .. } => {
                    let (scrutinee, cases) = typed.inductive.remove(name).expect("validated");
                    CompiledDefinition::Inductive { scrutinee, cases }
                }
                Definition::Axiomatic { .. } => CompiledDefinition::Axiomatic,
            };
            CompiledOperator {
                sig: o.sig.clone(),
                theory: t.name.clone(),
                type_params: params.clone(),
                definition,
                wd: typed.wd.remove(name),
            }
        })
        .collect();

    let rewrite_rules = t
        .rewrite_rules
        .iter()
        .map(|r| {
            let fs = typed.rewrites.remove(&r.name).expect("validated");
            CompiledRewrite {
                name: r.name.clone(),
                theory: t.name.clone(),
                type_params: params.clone(),
                vars: r.vars.iter().cloned().collect(),
                lhs: fs[0].clone(),
                cases: fs[1..].chunks(2).map(|c| RewriteCase { condition: c[0].clone(), rhs: c[1].clone() }).collect(),
                complete: r.complete,
                automatic: r.automatic,
            }
        })
        .collect();

    let inference_rules = t
        .inference_rules
        .iter()
        .map(|r| {
            let mut fs = typed.inferences.remove(&r.name).expect("validated");
            let infer = fs.pop().expect("infer clause");
            CompiledInference {
                name: r.name.clone(),
                theory: t.name.clone(),
                type_params: params.clone(),
                vars: r.vars.iter().cloned().collect(),
                givens: fs,
                infer,
                applicability: r.applicability,
                automatic: r.automatic,
            }
        })
        .collect();

    Ok(CompiledTheory {
        name: t.name.clone(),
        type_params: t.type_params.clone(),
        factory,
        operators,
        rewrite_rules,
        inference_rules,
        axioms: generated_axioms(t),
    })
}

/// Ordered compiled theories, the rule base a proof runs against. Rules
/// are tried in theory order, then declaration order.
#[derive(Clone, Debug)]
pub struct RuleBase {
    theories: Vec<Arc<CompiledTheory>>,
    factory: Arc<FormulaFactory>,
}

impl Default for RuleBase {
    fn default() -> Self {
        RuleBase::empty()
    }
}

impl RuleBase {
    pub fn empty() -> Self {
        RuleBase { theories: Vec::new(), factory: FormulaFactory::core() }
    }

    pub fn new(theories: Vec<Arc<CompiledTheory>>) -> Result<Self, AstError> {
        let mut factory = FormulaFactory::core();
        for t in &theories {
            factory = factory_union(&factory, &t.factory)?;
        }
        Ok(RuleBase { theories, factory })
    }

    pub fn theories(&self) -> &[Arc<CompiledTheory>] {
        &self.theories
    }

    pub fn factory(&self) -> &Arc<FormulaFactory> {
        &self.factory
    }

    pub fn operator(&self, name: &str) -> Option<&CompiledOperator> {
        self.theories.iter().flat_map(|t| &t.operators).find(|o| o.sig.name == name)
    }

    pub fn rewrite_rules(&self) -> impl Iterator<Item = &CompiledRewrite> {
        self.theories.iter().flat_map(|t| &t.rewrite_rules)
    }

    pub fn inference_rules(&self) -> impl Iterator<Item = &CompiledInference> {
        self.theories.iter().flat_map(|t| &t.inference_rules)
    }

    pub fn rewrite_rule(&self, theory: &str, name: &str) -> Option<&CompiledRewrite> {
        self.rewrite_rules().find(|r| r.theory == theory && r.name == name)
    }

    pub fn inference_rule(&self, theory: &str, name: &str) -> Option<&CompiledInference> {
        self.inference_rules().find(|r| r.theory == theory && r.name == name)
    }
}

/// Arguments of an operator application, regrouping the operands of an
/// associative application into the declared two.
fn operator_args(app: &Formula, sig: &OperatorSig) -> Option<Vec<Formula>> {
    let ch = app.children();
    if sig.associative && ch.len() > 2 {
        let rest = crate::matcher::assoc_run(app, &ch[1..])?;
        return Some(vec![ch[0].clone(), rest]);
    }
    Some(ch.to_vec())
}

/// Instantiates `body`, written over the operator's arguments (plus
/// `extra` bindings), at the application `app`.
pub(crate) fn instantiate(
    op: &CompiledOperator,
    app: &Formula,
    body: &Formula,
    extra: Vec<(String, Formula)>,
) -> Result<Formula, ExpandError> {
    let not = || ExpandError::NotExpandable(op.sig.name.clone());
    let args = operator_args(app, &op.sig).ok_or_else(not)?;
    let mut s = Specialisation::new();
    for ((_, ty), a) in op.sig.args.iter().zip(&args) {
        if !a.ty().is_some_and(|t| match_type(ty, t, &op.type_params, &mut s)) {
            return Err(not());
        }
    }
    if let (Some(r), Some(t)) = (&op.sig.result, app.ty()) {
        if !match_type(r, t, &op.type_params, &mut s) {
            return Err(not());
        }
    }
    for ((n, _), a) in op.sig.args.iter().zip(args) {
        s.put_var(n.clone(), a)?;
    }
    for (n, e) in extra {
        s.put_var(n, e)?;
    }
    let out = specialise(body, &s, &TypeEnvironment::new())?;
    Ok(out)
}

/// Unfolds one application of a directly or inductively defined operator.
pub fn expand_definition_formula(app: &Formula, rules: &RuleBase) -> Result<Formula, ExpandError> {
    let name = match app.kind() {
        Kind::Apply(n) => n.clone(),
        other => return Err(ExpandError::NotExpandable(other.tag().to_string())),
    };
    let op = rules.operator(&name).ok_or_else(|| ExpandError::NotExpandable(name.clone()))?;
    match &op.definition {
        CompiledDefinition::Direct(body) => instantiate(op, app, body, Vec::new()),
        CompiledDefinition::Inductive { scrutinee, cases } => {
            let args = operator_args(app, &op.sig).ok_or_else(|| ExpandError::NotExpandable(name.clone()))?;
            let arg = &args[*scrutinee];
            let Kind::Construct(ctor) = arg.kind() else {
                return Err(ExpandError::NotExpandable(name));
            };
            let (vars, body) = cases.get(ctor).ok_or_else(|| ExpandError::NotExpandable(name.clone()))?;
            let extra = vars.iter().cloned().zip(arg.children().iter().cloned()).collect();
            instantiate(op, app, body, extra)
        }
        CompiledDefinition::Axiomatic => Err(ExpandError::NotExpandable(name)),
    }
}
