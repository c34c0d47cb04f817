//! Type inference by first-order unification over `Type`, with inference
//! variables local to one checking run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ast::{Binder, Formula, Kind, Position, Type};
use crate::error::TypeError;
use crate::factory::FormulaFactory;

/// Types of free identifiers plus the type parameters and given sets in
/// scope.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnvironment {
    pub vars: BTreeMap<String, Type>,
    pub type_params: BTreeSet<String>,
    pub given_sets: BTreeSet<String>,
}

impl TypeEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var(mut self, name: impl Into<String>, ty: Type) -> Self {
        self.vars.insert(name.into(), ty);
        self
    }

    pub fn with_type_param(mut self, name: impl Into<String>) -> Self {
        self.type_params.insert(name.into());
        self
    }

    pub fn with_given_set(mut self, name: impl Into<String>) -> Self {
        self.given_sets.insert(name.into());
        self
    }

    pub fn var(&self, name: &str) -> Option<&Type> {
        self.vars.get(name)
    }

    /// Names that are both variables and type parameters or given sets.
    pub fn shadowing(&self) -> Vec<String> {
        self.vars.keys().filter(|v| self.type_params.contains(*v) || self.given_sets.contains(*v)).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    Param(String),
    Given(String),
    Power(Box<Ty>),
    Product(Box<Ty>, Box<Ty>),
    Data(String, Vec<Ty>),
    Var(usize),
}

impl Ty {
    fn power(t: Ty) -> Ty {
        Ty::Power(Box::new(t))
    }

    fn product(a: Ty, b: Ty) -> Ty {
        Ty::Product(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Int => write!(f, "ℤ"),
            Ty::Bool => write!(f, "BOOL"),
            Ty::Param(n) | Ty::Given(n) => write!(f, "{n}"),
            Ty::Power(t) => write!(f, "ℙ({t})"),
            Ty::Product(a, b) => write!(f, "({a} × {b})"),
            Ty::Data(n, args) if args.is_empty() => write!(f, "{n}"),
            Ty::Data(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Ty::Var(v) => write!(f, "?{v}"),
        }
    }
}

/// Annotated copy of the input tree, rebuilt once types are solved.
struct Ann {
    node: Formula,
    kind_override: Option<Kind>,
    ty: Option<Ty>,
    binder_tys: Vec<Ty>,
    typeset: Option<Ty>,
    children: Vec<Ann>,
}

struct Checker<'e> {
    env: &'e TypeEnvironment,
    subst: Vec<Option<Ty>>,
    free: BTreeMap<String, Ty>,
    scopes: Vec<(String, Ty)>,
}

impl<'e> Checker<'e> {
    fn new(env: &'e TypeEnvironment) -> Self {
        Checker { env, subst: Vec::new(), free: BTreeMap::new(), scopes: Vec::new() }
    }

    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Var(self.subst.len() - 1)
    }

    fn shallow(&self, t: &Ty) -> Ty {
        let mut cur = t.clone();
        while let Ty::Var(v) = cur {
            match &self.subst[v] {
                Some(next) => cur = next.clone(),
                None => return cur,
            }
        }
        cur
    }

    fn zonk(&self, t: &Ty) -> Ty {
        match self.shallow(t) {
            Ty::Power(a) => Ty::power(self.zonk(&a)),
            Ty::Product(a, b) => Ty::product(self.zonk(&a), self.zonk(&b)),
            Ty::Data(n, args) => Ty::Data(n, args.iter().map(|a| self.zonk(a)).collect()),
            other => other,
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.shallow(t) {
            Ty::Var(w) => v == w,
            Ty::Power(a) => self.occurs(v, &a),
            Ty::Product(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            Ty::Data(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => true,
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.subst[*x] = Some(t.clone());
                true
            }
            (Ty::Int, Ty::Int) | (Ty::Bool, Ty::Bool) => true,
            (Ty::Param(x), Ty::Param(y)) | (Ty::Given(x), Ty::Given(y)) => x == y,
            (Ty::Power(x), Ty::Power(y)) => self.unify(x, y),
            (Ty::Product(a1, b1), Ty::Product(a2, b2)) => self.unify(a1, a2) && self.unify(b1, b2),
            (Ty::Data(n1, a1), Ty::Data(n2, a2)) => {
                n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn expect(&mut self, pos: &Position, expected: &Ty, found: &Ty) -> Result<(), TypeError> {
        if self.unify(expected, found) {
            Ok(())
        } else {
            Err(TypeError::Mismatch {
                position: pos.clone(),
                expected: self.zonk(expected).to_string(),
                found: self.zonk(found).to_string(),
            })
        }
    }

    /// Resolves a written type against the environment and factory.
    fn resolve(&self, t: &Type, ff: &FormulaFactory) -> Result<Ty, TypeError> {
        Ok(match t {
            Type::Int => Ty::Int,
            Type::Bool => Ty::Bool,
            Type::Param(n) => Ty::Param(n.clone()),
            Type::Given(n) => {
                if self.env.type_params.contains(n) {
                    Ty::Param(n.clone())
                } else if self.env.given_sets.contains(n) || ff.is_axiomatic_type(n) {
                    Ty::Given(n.clone())
                } else if ff.datatype(n).is_some_and(|d| d.type_params.is_empty()) {
                    Ty::Data(n.clone(), Vec::new())
                } else {
                    return Err(TypeError::UnknownType(n.clone()));
                }
            }
            Type::Power(a) => Ty::power(self.resolve(a, ff)?),
            Type::Product(a, b) => Ty::product(self.resolve(a, ff)?, self.resolve(b, ff)?),
            Type::Datatype(n, args) => {
                let d = ff.datatype(n).ok_or_else(|| TypeError::UnknownType(n.clone()))?;
                if d.type_params.len() != args.len() {
                    return Err(TypeError::UnknownType(format!("{n}/{}", args.len())));
                }
                Ty::Data(n.clone(), args.iter().map(|a| self.resolve(a, ff)).collect::<Result<_, _>>()?)
            }
        })
    }

    /// Replaces the given parameters of a signature type with inference
    /// variables.
    fn instantiate(t: &Type, inst: &BTreeMap<String, Ty>) -> Ty {
        match t {
            Type::Int => Ty::Int,
            Type::Bool => Ty::Bool,
            Type::Param(n) => inst.get(n).cloned().unwrap_or_else(|| Ty::Param(n.clone())),
            Type::Given(n) => Ty::Given(n.clone()),
            Type::Power(a) => Ty::power(Self::instantiate(a, inst)),
            Type::Product(a, b) => Ty::product(Self::instantiate(a, inst), Self::instantiate(b, inst)),
            Type::Datatype(n, args) => Ty::Data(n.clone(), args.iter().map(|a| Self::instantiate(a, inst)).collect()),
        }
    }

    fn fresh_instance(&mut self, params: impl IntoIterator<Item = String>) -> BTreeMap<String, Ty> {
        params.into_iter().map(|p| (p, self.fresh())).collect()
    }

    fn lookup_bound(&self, name: &str) -> Option<Ty> {
        self.scopes.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t.clone())
    }

    fn infer(&mut self, f: &Formula, pos: &Position) -> Result<Ann, TypeError> {
        let ff = f.factory().clone();
        let mut children = Vec::with_capacity(f.children().len());
        let mut kind_override = None;
        let mut binder_tys = Vec::new();
        let mut typeset = None;

        // Quantifiers push their binders before visiting the body.
        if let Some(bs) = f.kind().binders() {
            for b in bs {
                let t = match &b.ty {
                    Some(t) => self.resolve(t, &ff)?,
                    None => self.fresh(),
                };
                binder_tys.push(t.clone());
                self.scopes.push((b.name.clone(), t));
            }
            let body = self.infer(&f.children()[0], &pos.child(0));
            self.scopes.truncate(self.scopes.len() - bs.len());
            children.push(body?);
        } else {
            for (i, c) in f.children().iter().enumerate() {
                children.push(self.infer(c, &pos.child(i))?);
            }
        }
        let cty = |i: usize| children[i].ty.clone().expect("expression operand");

        let ty: Option<Ty> = match f.kind() {
            Kind::True
            | Kind::False
            | Kind::Not
            | Kind::And
            | Kind::Or
            | Kind::Implies
            | Kind::Equiv
            | Kind::Forall(_)
            | Kind::Exists(_) => None,
            Kind::Equal | Kind::NotEqual => {
                let (a, b) = (cty(0), cty(1));
                self.expect(&pos.child(1), &a, &b)?;
                None
            }
            Kind::In => {
                let (a, b) = (cty(0), cty(1));
                self.expect(&pos.child(1), &Ty::power(a), &b)?;
                None
            }
            Kind::Subset => {
                let elem = self.fresh();
                let set = Ty::power(elem);
                self.expect(&pos.child(0), &set, &cty(0))?;
                self.expect(&pos.child(1), &set, &cty(1))?;
                None
            }
            Kind::Ident(name) => {
                if let Some(t) = self.lookup_bound(name) {
                    Some(t)
                } else if self.env.type_params.contains(name) {
                    let t = Type::Param(name.clone());
                    kind_override = Some(Kind::TypeSet(t));
                    typeset = Some(Ty::Param(name.clone()));
                    Some(Ty::power(Ty::Param(name.clone())))
                } else if self.env.given_sets.contains(name) {
                    let t = Type::Given(name.clone());
                    kind_override = Some(Kind::TypeSet(t));
                    typeset = Some(Ty::Given(name.clone()));
                    Some(Ty::power(Ty::Given(name.clone())))
                } else if let Some(t) = self.free.get(name) {
                    Some(t.clone())
                } else {
                    let t = match self.env.vars.get(name) {
                        Some(t) => self.resolve(t, &ff)?,
                        None => self.fresh(),
                    };
                    self.free.insert(name.clone(), t.clone());
                    Some(t)
                }
            }
            Kind::Int(_) => Some(Ty::Int),
            Kind::Bool(_) => Some(Ty::Bool),
            Kind::TypeSet(t) => {
                let r = self.resolve(t, &ff)?;
                typeset = Some(r.clone());
                Some(Ty::power(r))
            }
            Kind::Empty => {
                let e = self.fresh();
                Some(Ty::power(e))
            }
            Kind::Add | Kind::Sub | Kind::Mul | Kind::Div => {
                self.expect(&pos.child(0), &Ty::Int, &cty(0))?;
                self.expect(&pos.child(1), &Ty::Int, &cty(1))?;
                Some(Ty::Int)
            }
            Kind::Neg => {
                self.expect(&pos.child(0), &Ty::Int, &cty(0))?;
                Some(Ty::Int)
            }
            Kind::Range => {
                self.expect(&pos.child(0), &Ty::Int, &cty(0))?;
                self.expect(&pos.child(1), &Ty::Int, &cty(1))?;
                Some(Ty::power(Ty::Int))
            }
            Kind::Maplet => Some(Ty::product(cty(0), cty(1))),
            Kind::SetExt => {
                let elem = cty(0);
                for i in 1..children.len() {
                    self.expect(&pos.child(i), &elem, &cty(i))?;
                }
                Some(Ty::power(elem))
            }
            Kind::Pow => {
                let elem = self.fresh();
                self.expect(&pos.child(0), &Ty::power(elem.clone()), &cty(0))?;
                Some(Ty::power(Ty::power(elem)))
            }
            Kind::CProd => {
                let (a, b) = (self.fresh(), self.fresh());
                self.expect(&pos.child(0), &Ty::power(a.clone()), &cty(0))?;
                self.expect(&pos.child(1), &Ty::power(b.clone()), &cty(1))?;
                Some(Ty::power(Ty::product(a, b)))
            }
            Kind::Union | Kind::Inter => {
                let elem = self.fresh();
                let set = Ty::power(elem);
                self.expect(&pos.child(0), &set, &cty(0))?;
                self.expect(&pos.child(1), &set, &cty(1))?;
                Some(set)
            }
            Kind::Comp => {
                let first = self.fresh();
                let mut mid = self.fresh();
                self.expect(&pos.child(0), &Ty::power(Ty::product(first.clone(), mid.clone())), &cty(0))?;
                for i in 1..children.len() {
                    let next = self.fresh();
                    self.expect(&pos.child(i), &Ty::power(Ty::product(mid, next.clone())), &cty(i))?;
                    mid = next;
                }
                Some(Ty::power(Ty::product(first, mid)))
            }
            Kind::Apply(name) => {
                let sig = ff.operator(name).expect("built nodes reference known operators").clone();
                let mut params = BTreeSet::new();
                for (_, t) in &sig.args {
                    params.extend(t.params());
                }
                if let Some(r) = &sig.result {
                    params.extend(r.params());
                }
                let inst = self.fresh_instance(params);
                for i in 0..children.len() {
                    let declared = if sig.associative { &sig.args[0].1 } else { &sig.args[i].1 };
                    let want = Self::instantiate(declared, &inst);
                    self.expect(&pos.child(i), &want, &cty(i))?;
                }
                sig.result.as_ref().map(|r| Self::instantiate(r, &inst))
            }
            Kind::Construct(name) => {
                let (d, c) = ff.constructor(name).expect("built nodes reference known constructors");
                let (d, c) = (d.clone(), c.clone());
                let inst = self.fresh_instance(d.type_params.iter().cloned());
                for (i, (_, t)) in c.destructors.iter().enumerate() {
                    let want = Self::instantiate(t, &inst);
                    self.expect(&pos.child(i), &want, &cty(i))?;
                }
                Some(Self::instantiate(&d.generic_type(), &inst))
            }
            Kind::Destruct(name) => {
                let (d, field) = ff.destructor(name).expect("built nodes reference known destructors");
                let (d, field) = (d.clone(), field.clone());
                let inst = self.fresh_instance(d.type_params.iter().cloned());
                let want = Self::instantiate(&d.generic_type(), &inst);
                self.expect(&pos.child(0), &want, &cty(0))?;
                Some(Self::instantiate(&field, &inst))
            }
        };

        // Respect annotations already present on the node.
        if let (Some(t), Some(given)) = (&ty, f.ty()) {
            if !matches!(f.kind(), Kind::TypeSet(_)) {
                let given = self.resolve(given, &ff)?;
                self.expect(pos, &given, t)?;
            }
        }

        Ok(Ann { node: f.clone(), kind_override, ty, binder_tys, typeset, children })
    }

    fn ground(&self, t: &Ty, pos: &Position) -> Result<Type, TypeError> {
        Ok(match self.shallow(t) {
            Ty::Int => Type::Int,
            Ty::Bool => Type::Bool,
            Ty::Param(n) => Type::Param(n),
            Ty::Given(n) => Type::Given(n),
            Ty::Power(a) => Type::power(self.ground(&a, pos)?),
            Ty::Product(a, b) => Type::product(self.ground(&a, pos)?, self.ground(&b, pos)?),
            Ty::Data(n, args) => Type::Datatype(n, args.iter().map(|a| self.ground(a, pos)).collect::<Result<_, _>>()?),
            Ty::Var(_) => return Err(TypeError::UnresolvedTypeParam { position: pos.clone() }),
        })
    }

    fn rebuild(&self, ann: &Ann, pos: &Position) -> Result<Formula, TypeError> {
        let children = ann
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| self.rebuild(c, &pos.child(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut kind = ann.kind_override.clone().unwrap_or_else(|| ann.node.kind().clone());
        match &mut kind {
            Kind::Forall(bs) | Kind::Exists(bs) => {
                *bs = bs
                    .iter()
                    .zip(&ann.binder_tys)
                    .map(|(b, t)| Ok(Binder { name: b.name.clone(), ty: Some(self.ground(t, pos)?) }))
                    .collect::<Result<Vec<_>, TypeError>>()?;
            }
            Kind::TypeSet(t) => {
                *t = self.ground(ann.typeset.as_ref().expect("type set resolved"), pos)?;
            }
            _ => {}
        }
        let ty = ann.ty.as_ref().map(|t| self.ground(t, pos)).transpose()?;
        Ok(Formula::build(ann.node.factory(), kind, children, ty)?)
    }
}

/// Type checks `f`, returning a copy with every expression node typed.
/// Free identifiers absent from `env` are inferred.
pub fn typecheck(f: &Formula, env: &TypeEnvironment) -> Result<Formula, TypeError> {
    let (mut out, _) = typecheck_all(std::slice::from_ref(f), env)?;
    Ok(out.remove(0))
}

/// Checks several formulas that share free identifiers (the hypotheses and
/// goal of a sequent, or the sides of a rule). Returns the typed formulas
/// and `env` extended with the inferred identifier types.
pub fn typecheck_all(fs: &[Formula], env: &TypeEnvironment) -> Result<(Vec<Formula>, TypeEnvironment), TypeError> {
    let mut checker = Checker::new(env);
    let anns = fs.iter().map(|f| checker.infer(f, &Position::root())).collect::<Result<Vec<_>, _>>()?;
    let typed = anns.iter().map(|a| checker.rebuild(a, &Position::root())).collect::<Result<Vec<_>, _>>()?;
    let mut out_env = env.clone();
    for (name, t) in &checker.free {
        let t = checker.ground(t, &Position::root())?;
        out_env.vars.insert(name.clone(), t);
    }
    Ok((typed, out_env))
}
