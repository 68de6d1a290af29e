//! Textual descriptors for groups, generating sets and Lie algebras.
//!
//! ```text
//! heisenberg                      context
//! heisenberg:standard             standard symmetric generating set
//! heisenberg:S(2,8)               S(j, k)
//! heisenberg:[(1,0,0),(-1,0,0)]   inline, must be symmetric
//! abelian:d=2   cyclic:n=7   abelian:moduli=0,5
//! unitriangular:n=4   free:d=2,s=3
//! lie:heis.json   lie:{...json...}:standard
//! ```
//!
//! Every parsed descriptor has a canonical spelling that parses back to the
//! same value.

use std::fmt;
use std::path::Path;

use nilgrowth::groups::{GeneratingSet, GroupContext, GroupElement};
use nilgrowth::heisenberg_scaling::s_family;
use nilgrowth::lie_algebra::LieAlgebra;
use nilgrowth::Q;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum ContextSpec {
    Heisenberg,
    Abelian { moduli: Vec<u64> },
    Unitriangular { n: usize },
    Free { d: usize, s: usize },
    Lie(LieAlgebra),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GensSpec {
    Standard,
    SFamily { j: u64, k: u64 },
    Inline(Vec<GroupElement>),
}

#[derive(Clone, Debug)]
pub enum Descriptor {
    Context(ContextSpec),
    Set(ContextSpec, GensSpec),
    Algebra(LieAlgebra),
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl ContextSpec {
    pub fn build(&self) -> Result<GroupContext, CliError> {
        Ok(match self {
            ContextSpec::Heisenberg => GroupContext::Heisenberg,
            ContextSpec::Abelian { moduli } => GroupContext::Abelian { moduli: moduli.clone() },
            ContextSpec::Unitriangular { n } => GroupContext::unitriangular(*n)?,
            ContextSpec::Free { d, s } => GroupContext::free_nilpotent(*d, *s)?,
            ContextSpec::Lie(a) => GroupContext::lie_lattice(a.clone())?,
        })
    }
}

impl fmt::Display for ContextSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextSpec::Heisenberg => write!(f, "heisenberg"),
            ContextSpec::Abelian { moduli } if moduli.iter().all(|&m| m == 0) => write!(f, "abelian:d={}", moduli.len()),
            ContextSpec::Abelian { moduli } if moduli.len() == 1 => write!(f, "cyclic:n={}", moduli[0]),
            ContextSpec::Abelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(u64::to_string).collect();
                write!(f, "abelian:moduli={}", parts.join(","))
            }
            ContextSpec::Unitriangular { n } => write!(f, "unitriangular:n={n}"),
            ContextSpec::Free { d, s } => write!(f, "free:d={d},s={s}"),
            ContextSpec::Lie(a) => write!(f, "lie:{}", compact_json(&a.to_json())),
        }
    }
}

impl fmt::Display for GensSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GensSpec::Standard => write!(f, "standard"),
            GensSpec::SFamily { j, k } => write!(f, "S({j},{k})"),
            GensSpec::Inline(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Context(c) => write!(f, "{c}"),
            Descriptor::Set(c, g) => write!(f, "{c}:{g}"),
            Descriptor::Algebra(a) => write!(f, "{}", compact_json(&a.to_json())),
        }
    }
}

fn compact_json(text: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(text).expect("algebra JSON is valid");
    v.to_string()
}

impl Descriptor {
    /// The group context; a bare algebra becomes its lattice group.
    pub fn context(&self) -> Result<GroupContext, CliError> {
        match self {
            Descriptor::Context(c) | Descriptor::Set(c, _) => c.build(),
            Descriptor::Algebra(a) => Ok(GroupContext::lie_lattice(a.clone())?),
        }
    }

    /// The symmetric generating set, `standard` unless one was given.
    pub fn generating_set(&self) -> Result<GeneratingSet, CliError> {
        let ctx = self.context()?;
        match self {
            Descriptor::Set(spec, gens) => build_set(spec, ctx, gens),
            _ => Ok(GeneratingSet::standard(ctx)),
        }
    }

    /// Replaces the generators of a context descriptor; a descriptor that
    /// already names its generators must agree.
    pub fn with_gens(self, gens: Option<&str>) -> Result<Descriptor, CliError> {
        let Some(text) = gens else { return Ok(self) };
        match self {
            Descriptor::Context(c) => {
                let g = parse_gens(&c, text)?;
                Ok(Descriptor::Set(c, g))
            }
            Descriptor::Algebra(a) => {
                let c = ContextSpec::Lie(a);
                let g = parse_gens(&c, text)?;
                Ok(Descriptor::Set(c, g))
            }
            Descriptor::Set(..) => Err(invalid("generators given both in the descriptor and in --gens")),
        }
    }
}

fn build_set(spec: &ContextSpec, ctx: GroupContext, gens: &GensSpec) -> Result<GeneratingSet, CliError> {
    match gens {
        GensSpec::Standard => Ok(GeneratingSet::standard(ctx)),
        GensSpec::SFamily { j, k } => {
            if *spec != ContextSpec::Heisenberg {
                return Err(invalid("S(j,k) is only defined for the Heisenberg group"));
            }
            Ok(s_family(*j, *k)?)
        }
        GensSpec::Inline(v) => Ok(GeneratingSet::new(ctx, v.clone())?),
    }
}

pub fn parse_descriptor(text: &str) -> Result<Descriptor, CliError> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(Descriptor::Algebra(LieAlgebra::from_json(text)?));
    }
    if text.ends_with(".json") && !text.contains(':') {
        return Ok(Descriptor::Algebra(read_algebra(Path::new(text))?));
    }
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let (spec, gens) = match kind {
        "heisenberg" => (ContextSpec::Heisenberg, opt(rest)),
        "abelian" | "cyclic" | "unitriangular" | "free" => {
            let (params, gens) = rest.split_once(':').unwrap_or((rest, ""));
            (parse_params(kind, params)?, opt(gens))
        }
        "lie" => {
            let (alg, gens) = split_lie(rest)?;
            (ContextSpec::Lie(alg), gens)
        }
        other => return Err(invalid(format!("unknown kind tag {other:?}"))),
    };
    match gens {
        None => Ok(Descriptor::Context(spec)),
        Some(g) => {
            let g = parse_gens(&spec, g)?;
            // Resolve now so that bad sets fail at parse time.
            build_set(&spec, spec.build()?, &g)?;
            Ok(Descriptor::Set(spec, g))
        }
    }
}

fn opt(s: &str) -> Option<&str> {
    (!s.is_empty()).then_some(s)
}

fn split_lie(rest: &str) -> Result<(LieAlgebra, Option<&str>), CliError> {
    if rest.starts_with('{') {
        let end = rest.rfind('}').ok_or_else(|| invalid("unterminated inline algebra"))?;
        let gens = rest[end + 1..].strip_prefix(':');
        if gens.is_none() && end + 1 != rest.len() {
            return Err(invalid(format!("trailing text after algebra: {:?}", &rest[end + 1..])));
        }
        return Ok((LieAlgebra::from_json(&rest[..=end])?, gens));
    }
    match rest.rsplit_once(':') {
        Some((path, gens)) if is_gens(gens) => Ok((read_algebra(Path::new(path))?, Some(gens))),
        _ => Ok((read_algebra(Path::new(rest))?, None)),
    }
}

fn is_gens(s: &str) -> bool {
    s == "standard" || s.starts_with("S(") || s.starts_with('[') || s.starts_with('(')
}

pub fn read_algebra(path: &Path) -> Result<LieAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(LieAlgebra::from_json(&text)?)
}

/// `--algebra`: a JSON file, inline JSON, or one of `heisenberg`,
/// `free:d=D,s=S`, `abelian:d=N`.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra, CliError> {
    let text = text.trim();
    let (kind, params) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "heisenberg" if params.is_empty() => Ok(LieAlgebra::heisenberg()),
        "free" => {
            let p = key_values(params)?;
            Ok(LieAlgebra::free(get(&p, "d")?, get(&p, "s")?)?)
        }
        "abelian" => Ok(LieAlgebra::abelian(get(&key_values(params)?, "d")?)),
        "lie" => Ok(split_lie(params)?.0),
        _ if text.starts_with('{') => Ok(LieAlgebra::from_json(text)?),
        _ => read_algebra(Path::new(text)),
    }
}

fn key_values(params: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for part in params.split(',').filter(|p| !p.is_empty()) {
        match part.split_once('=') {
            Some((k, v)) => out.push((k.trim().into(), v.trim().into())),
            // Continuation of a list value, as in moduli=0,5.
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(part.trim());
                }
                None => return Err(invalid(format!("expected key=value, got {part:?}"))),
            },
        }
    }
    Ok(out)
}

fn get<T: std::str::FromStr>(p: &[(String, String)], key: &str) -> Result<T, CliError> {
    let v = p.iter().find(|(k, _)| k == key).ok_or_else(|| invalid(format!("missing parameter {key}")))?;
    v.1.parse().map_err(|_| invalid(format!("bad value for {key}: {:?}", v.1)))
}

fn parse_params(kind: &str, params: &str) -> Result<ContextSpec, CliError> {
    let p = key_values(params)?;
    let allowed: &[&str] = match kind {
        "abelian" => &["d", "moduli"],
        "cyclic" => &["n"],
        "unitriangular" => &["n"],
        _ => &["d", "s"],
    };
    if let Some((k, _)) = p.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(invalid(format!("unknown parameter {k:?} for {kind}")));
    }
    Ok(match kind {
        "abelian" if p.iter().any(|(k, _)| k == "moduli") => {
            let raw: String = get(&p, "moduli")?;
            let moduli = raw
                .split(',')
                .map(|m| m.trim().parse().map_err(|_| invalid(format!("bad modulus {m:?}"))))
                .collect::<Result<Vec<u64>, _>>()?;
            if moduli.is_empty() || moduli.contains(&1) {
                return Err(invalid("moduli must be 0 (for Z) or at least 2"));
            }
            ContextSpec::Abelian { moduli }
        }
        "abelian" => {
            let d: usize = get(&p, "d")?;
            if d == 0 {
                return Err(invalid("abelian rank must be positive"));
            }
            ContextSpec::Abelian { moduli: vec![0; d] }
        }
        "cyclic" => {
            let n: u64 = get(&p, "n")?;
            if n < 2 {
                return Err(invalid("cyclic order must be at least 2"));
            }
            ContextSpec::Abelian { moduli: vec![n] }
        }
        "unitriangular" => ContextSpec::Unitriangular { n: get(&p, "n")? },
        _ => ContextSpec::Free { d: get(&p, "d")?, s: get(&p, "s")? },
    })
}

fn parse_gens(spec: &ContextSpec, text: &str) -> Result<GensSpec, CliError> {
    let text = text.trim();
    if text == "standard" {
        return Ok(GensSpec::Standard);
    }
    if let Some(inner) = text.strip_prefix("S(").and_then(|t| t.strip_suffix(')')) {
        let (j, k) = inner.split_once(',').ok_or_else(|| invalid(format!("malformed {text:?}")))?;
        let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| invalid(format!("malformed {text:?}")));
        return Ok(GensSpec::SFamily { j: parse(j)?, k: parse(k)? });
    }
    let ctx = spec.build()?;
    Ok(GensSpec::Inline(parse_elements(&ctx, text)?))
}

/// `[(1,0,0),(0,1,0)]` or `(1,0,0);(0,1,0)`; entries are integers or `p/q`.
pub fn parse_elements(ctx: &GroupContext, text: &str) -> Result<Vec<GroupElement>, CliError> {
    let text = text.trim();
    let inner = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(text);
    let rational = matches!(ctx.identity(), GroupElement::Rat(_));
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| invalid(format!("expected '(' at {rest:?}")))?;
        let close = body.find(')').ok_or_else(|| invalid("unterminated element"))?;
        let coords = body[..close]
            .split(',')
            .map(|c| c.trim().parse::<Q>().map_err(|_| invalid(format!("bad coordinate {c:?}"))))
            .collect::<Result<Vec<Q>, _>>()?;
        let g = if rational {
            GroupElement::Rat(coords)
        } else {
            let ints = coords
                .iter()
                .map(|c| if c.is_integer() { num_traits::ToPrimitive::to_i64(&c.to_integer()) } else { None })
                .collect::<Option<Vec<i64>>>()
                .ok_or_else(|| invalid(format!("integer coordinates expected in ({})", &body[..close])))?;
            GroupElement::Int(ints)
        };
        ctx.check(&g)?;
        out.push(ctx.canonical(g));
        rest = body[close + 1..].trim_start().trim_start_matches([',', ';']).trim_start();
    }
    if out.is_empty() {
        return Err(invalid("empty element list"));
    }
    Ok(out)
}
