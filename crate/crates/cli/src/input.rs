//! Resolving command-line specifiers into groups, subgroups and automorphisms.

use std::path::Path;

use extlift_core::catalog::parse_group_expr;
use extlift_core::group::{automorphism_group, center_and_derived, sylow_subgroup};
use extlift_core::json::{parse_group, parse_subgroup};
use extlift_core::{Error, FiniteGroup, GroupAutomorphism, Result, Subgroup};

/// `catalog:<expr>` or a path to a group JSON file.
pub fn load_group(source: &str) -> Result<FiniteGroup> {
    if let Some(expr) = source.strip_prefix("catalog:") {
        return parse_group_expr(expr);
    }
    let text =
        std::fs::read_to_string(Path::new(source)).map_err(|e| Error::invalid(format!("cannot read {source}: {e}")))?;
    parse_group(&text).map_err(|e| Error::invalid(format!("{source}: {e}")))
}

/// `center`, `derived`, `trivial`, `whole`, `sylow:p`, `members:a,b,...`,
/// inline `{"members": [...]}` or a path to a subgroup JSON file.
pub fn resolve_subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup> {
    let spec = spec.trim();
    match spec {
        "center" => return Ok(center_and_derived(g).0),
        "derived" => return Ok(center_and_derived(g).1),
        "trivial" => return Ok(Subgroup::trivial(g)),
        "whole" => return Ok(Subgroup::whole(g)),
        _ => {}
    }
    if let Some(p) = spec.strip_prefix("sylow:") {
        let p: usize = p
            .parse()
            .map_err(|_| Error::invalid(format!("bad prime in `{spec}`")))?;
        if !extlift_core::group::is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        return Ok(sylow_subgroup(g, p));
    }
    if let Some(list) = spec.strip_prefix("members:") {
        return Subgroup::new(g, parse_list(list)?);
    }
    if spec.starts_with('{') {
        return parse_subgroup(g, spec);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::invalid(format!("cannot read {spec}: {e}")))?;
    parse_subgroup(g, &text)
}

pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad integer `{t}`")))
        })
        .collect()
}

/// Resolves an automorphism specifier on `group`.
///
/// `label` translates user-facing element numbers into `group` indices; it
/// is the identity for `H` and the member lookup for `N`.
///
/// Accepted forms: `identity`, `inversion`, `inner:g`, `index:k` (into the
/// enumerated automorphism group), `images:i0,i1,...` (the image of every
/// element in order) and `gens:a->b,c->d` (images of generators).
pub fn resolve_automorphism(
    group: &FiniteGroup,
    spec: &str,
    label: &dyn Fn(usize) -> Option<usize>,
) -> Result<GroupAutomorphism> {
    let spec = spec.trim();
    let lookup = |x: usize| label(x).ok_or_else(|| Error::invalid(format!("element {x} is out of range")));
    match spec {
        "identity" | "id" => return Ok(GroupAutomorphism::identity(group)),
        "inversion" => return GroupAutomorphism::inversion(group),
        _ => {}
    }
    if let Some(g) = spec.strip_prefix("inner:") {
        let g = lookup(parse_one(g)?)?;
        return Ok(GroupAutomorphism::inner(group, g));
    }
    if let Some(k) = spec.strip_prefix("index:") {
        let k = parse_one(k)?;
        let all = automorphism_group(group)?;
        let size = all.len();
        return all
            .into_iter()
            .nth(k)
            .ok_or_else(|| Error::invalid(format!("automorphism index {k} out of range (group has {size})")));
    }
    if let Some(list) = spec.strip_prefix("images:") {
        let images = parse_list(list)?.into_iter().map(lookup).collect::<Result<Vec<_>>>()?;
        return GroupAutomorphism::new(group, images);
    }
    if let Some(list) = spec.strip_prefix("gens:") {
        let mut assignment = Vec::new();
        for pair in list.split(',').filter(|t| !t.trim().is_empty()) {
            let (a, b) = pair
                .split_once("->")
                .ok_or_else(|| Error::invalid(format!("expected `a->b`, got `{pair}`")))?;
            assignment.push((lookup(parse_one(a)?)?, lookup(parse_one(b)?)?));
        }
        return GroupAutomorphism::from_generator_images(group, &assignment)
            .ok_or_else(|| Error::invalid(format!("`{spec}` does not define an automorphism")));
    }
    Err(Error::invalid(format!("unknown automorphism specifier `{spec}`")))
}

fn parse_one(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad integer `{s}`")))
}
