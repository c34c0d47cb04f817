use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{Binder, Formula, Kind, Type};
use crate::error::SpecialisationError;

use super::TypeEnvironment;

/// A simultaneous instantiation of type parameters and free identifiers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Specialisation {
    types: BTreeMap<String, Type>,
    vars: BTreeMap<String, Formula>,
}

impl Specialisation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Maps type parameter `name` to `ty`. Remapping a name to a different
    /// type is an error.
    pub fn put_type(&mut self, name: impl Into<String>, ty: Type) -> Result<(), SpecialisationError> {
        let name = name.into();
        match self.types.get(&name) {
            Some(old) if *old != ty => Err(SpecialisationError::InconsistentSpecialisation(name)),
            _ => {
                self.types.insert(name, ty);
                Ok(())
            }
        }
    }

    /// Maps free identifier `name` to the typed expression `expr`.
    pub fn put_var(&mut self, name: impl Into<String>, expr: Formula) -> Result<(), SpecialisationError> {
        let name = name.into();
        if expr.is_predicate() || expr.ty().is_none() {
            return Err(SpecialisationError::InconsistentSpecialisation(name));
        }
        match self.vars.get(&name) {
            Some(old) if *old != expr => Err(SpecialisationError::InconsistentSpecialisation(name)),
            _ => {
                self.vars.insert(name, expr);
                Ok(())
            }
        }
    }

    pub fn types(&self) -> &BTreeMap<String, Type> {
        &self.types
    }

    pub fn vars(&self) -> &BTreeMap<String, Formula> {
        &self.vars
    }

    pub fn type_of(&self, name: &str) -> Option<&Type> {
        self.types.get(name)
    }

    pub fn var(&self, name: &str) -> Option<&Formula> {
        self.vars.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty() && self.vars.is_empty()
    }

    /// The specialisation equivalent to applying `self` and then `then`.
    pub fn compose(&self, then: &Specialisation) -> Result<Specialisation, SpecialisationError> {
        let mut out = Specialisation::new();
        for (k, t) in &self.types {
            out.types.insert(k.clone(), apply_type(t, then));
        }
        for (k, t) in &then.types {
            out.types.entry(k.clone()).or_insert_with(|| t.clone());
        }
        for (k, e) in &self.vars {
            out.vars.insert(k.clone(), specialise(e, then, &TypeEnvironment::new())?);
        }
        for (k, e) in &then.vars {
            out.vars.entry(k.clone()).or_insert_with(|| e.clone());
        }
        Ok(out)
    }
}

pub fn apply_type(t: &Type, s: &Specialisation) -> Type {
    if s.types.is_empty() {
        return t.clone();
    }
    t.map(&|x| match x {
        Type::Param(p) => s.types.get(p).cloned(),
        _ => None,
    })
}

/// Applies `s` to the identifier types of `env`.
pub fn specialise_env(env: &TypeEnvironment, s: &Specialisation) -> TypeEnvironment {
    let mut out = env.clone();
    for t in out.vars.values_mut() {
        *t = apply_type(t, s);
    }
    for p in s.types.keys() {
        out.type_params.remove(p);
    }
    out
}

/// Applies `s` to a typed formula. Bound identifiers that would capture a
/// free identifier of a substituted expression are renamed by appending
/// primes.
pub fn specialise(f: &Formula, s: &Specialisation, env: &TypeEnvironment) -> Result<Formula, SpecialisationError> {
    for p in s.types.keys() {
        if env.given_sets.contains(p) {
            return Err(SpecialisationError::GivenTypeParameter(p.clone()));
        }
    }
    for (v, e) in &s.vars {
        if let Some(t) = env.vars.get(v) {
            if Some(&apply_type(t, s)) != e.ty() {
                return Err(SpecialisationError::InconsistentSpecialisation(v.clone()));
            }
        }
    }
    if s.is_empty() {
        return Ok(f.clone());
    }
    go(f, s, &s.vars, &BTreeMap::new())
}

fn go(
    f: &Formula,
    s: &Specialisation,
    vars: &BTreeMap<String, Formula>,
    renames: &BTreeMap<String, String>,
) -> Result<Formula, SpecialisationError> {
    let ty = f.ty().map(|t| apply_type(t, s));
    let kind = f.kind();
    match kind {
        Kind::Ident(n) => {
            if let Some(new) = renames.get(n) {
                return Ok(Formula::build(f.factory(), Kind::Ident(new.clone()), Vec::new(), ty)?);
            }
            if let Some(e) = vars.get(n) {
                if ty.is_some() && ty.as_ref() != e.ty() {
                    return Err(SpecialisationError::InconsistentSpecialisation(n.clone()));
                }
                return Ok(e.clone());
            }
            Ok(Formula::build(f.factory(), kind.clone(), Vec::new(), ty)?)
        }
        Kind::Forall(bs) | Kind::Exists(bs) => {
            let body = &f.children()[0];
            let mut inner_vars = vars.clone();
            let mut inner_renames = renames.clone();
            for b in bs {
                inner_vars.remove(&b.name);
                inner_renames.remove(&b.name);
            }
            let mut danger = BTreeSet::new();
            for (v, e) in &inner_vars {
                if body.has_free(v) {
                    danger.extend(e.free_idents().into_keys());
                }
            }
            for new in inner_renames.values() {
                danger.insert(new.clone());
            }
            let mut taken: BTreeSet<String> = body.all_names();
            taken.extend(danger.iter().cloned());
            taken.extend(bs.iter().map(|b| b.name.clone()));
            let mut new_bs = Vec::with_capacity(bs.len());
            for b in bs {
                let mut name = b.name.clone();
                if danger.contains(&name) {
                    while taken.contains(&name) {
                        name.push('\'');
                    }
                    taken.insert(name.clone());
                    inner_renames.insert(b.name.clone(), name.clone());
                }
                new_bs.push(Binder { name, ty: b.ty.as_ref().map(|t| apply_type(t, s)) });
            }
            let body = go(body, s, &inner_vars, &inner_renames)?;
            let kind = if matches!(kind, Kind::Forall(_)) { Kind::Forall(new_bs) } else { Kind::Exists(new_bs) };
            Ok(Formula::build(f.factory(), kind, vec![body], None)?)
        }
        Kind::TypeSet(t) => Ok(Formula::build(f.factory(), Kind::TypeSet(apply_type(t, s)), Vec::new(), ty)?),
        _ => {
            let children = f.children().iter().map(|c| go(c, s, vars, renames)).collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::build(f.factory(), kind.clone(), children, ty)?)
        }
    }
}
