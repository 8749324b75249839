use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use trs_core::echelon::{self, Echelon, EchelonMatrix, EchelonSpace};
use trs_core::gapw::{self, GapSpace, GapWord};
use trs_core::gpartitions::{self, FiniteGroup, GPartSpace, GPartWord};
use trs_core::param_words::{self, ParamSpace, ParamWord};
use trs_core::search::ColorFn;
use trs_core::{Error, Result, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceName {
    Param,
    ParamAsc,
    Gapw,
    Gpart,
    Echelon,
}

/// Space selection shared by every subcommand and by search job files.
#[derive(Debug, Clone, Args, Deserialize)]
pub struct SpaceArgs {
    #[arg(long, value_enum, default_value = "param")]
    #[serde(rename = "name", default = "default_space")]
    pub space: SpaceName,
    /// Number of constant labels.
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub t: usize,
    /// Row width for gapw words.
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub m: usize,
    /// Field order for echelon matrices.
    #[arg(long, default_value_t = 2)]
    #[serde(default = "two")]
    pub q: usize,
    /// Group for gpart: `trivial`, `Z<n>`, or a JSON Cayley-table file.
    #[arg(long, default_value = "trivial")]
    #[serde(default = "trivial")]
    pub group: String,
    /// gpart only: forbid ν before the anchor of the first block.
    #[arg(long)]
    #[serde(default)]
    pub strict: bool,
}

fn default_space() -> SpaceName {
    SpaceName::Param
}
fn one() -> usize {
    1
}
fn two() -> usize {
    2
}
fn trivial() -> String {
    "trivial".into()
}

pub fn load_group(name: &str) -> Result<FiniteGroup> {
    if name.eq_ignore_ascii_case("trivial") {
        return Ok(FiniteGroup::trivial());
    }
    if let Some(n) = name.strip_prefix(['Z', 'z']).and_then(|s| s.trim_start_matches('_').parse::<usize>().ok()) {
        if n == 0 {
            return Err(Error::Domain("Z_0 is not a finite group".into()));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    let v = crate::read_json(name)?;
    FiniteGroup::from_json(&v)
}

pub enum AnySpace {
    Param(ParamSpace),
    Gap(GapSpace),
    GPart(GPartSpace),
    Echelon(EchelonSpace),
}

impl AnySpace {
    pub fn build(a: &SpaceArgs) -> Result<AnySpace> {
        Ok(match a.space {
            SpaceName::Param => AnySpace::Param(ParamSpace::new(a.t, false)),
            SpaceName::ParamAsc => AnySpace::Param(ParamSpace::new(a.t, true)),
            SpaceName::Gapw => AnySpace::Gap(GapSpace::new(a.t, a.m)?),
            SpaceName::Gpart => {
                let g = load_group(&a.group)?;
                AnySpace::GPart(if a.strict { GPartSpace::strict(g) } else { GPartSpace::new(g) })
            }
            SpaceName::Echelon => AnySpace::Echelon(EchelonSpace::new(a.q)?),
        })
    }
}

/// Runs `$body` with `$s` bound to the concrete space.
#[macro_export]
macro_rules! with_space {
    ($any:expr, $s:ident => $body:expr) => {
        match $any {
            $crate::spaces::AnySpace::Param($s) => $body,
            $crate::spaces::AnySpace::Gap($s) => $body,
            $crate::spaces::AnySpace::GPart($s) => $body,
            $crate::spaces::AnySpace::Echelon($s) => $body,
        }
    };
}

/// What the command layer needs beyond the shared signature.
pub trait CliSpace: Space {
    fn parse(&self, v: &Value) -> Result<Self::Elem>;
    fn identity(&self, n: usize) -> Self::Elem;
    fn project(&self, a: &Self::Elem, k: usize) -> Result<Self::Elem>;
    /// Entries that belong to a free class.
    fn support(&self, a: &Self::Elem) -> usize;
}

impl CliSpace for ParamSpace {
    fn parse(&self, v: &Value) -> Result<ParamWord> {
        let a = param_words::from_json(v)?;
        self.validate(&a)?;
        Ok(a)
    }
    fn identity(&self, n: usize) -> ParamWord {
        ParamWord::identity(self.t, n, self.ascending)
    }
    fn project(&self, a: &ParamWord, k: usize) -> Result<ParamWord> {
        a.project(k)
    }
    fn support(&self, a: &ParamWord) -> usize {
        a.values().iter().filter(|&&v| v >= a.t()).count()
    }
}

impl CliSpace for GapSpace {
    fn parse(&self, v: &Value) -> Result<GapWord> {
        let a = gapw::from_json(v)?;
        self.validate(&a)?;
        Ok(a)
    }
    fn identity(&self, n: usize) -> GapWord {
        GapWord::identity(self.t, self.m, n)
    }
    fn project(&self, a: &GapWord, k: usize) -> Result<GapWord> {
        a.project(k)
    }
    fn support(&self, a: &GapWord) -> usize {
        let t = a.t();
        (t..a.rows()).filter(|&i| a.row(i).iter().any(|&c| c >= t)).count()
    }
}

impl CliSpace for GPartSpace {
    fn parse(&self, v: &Value) -> Result<GPartWord> {
        let a = gpartitions::from_json(v, Some(&self.group))?;
        self.validate(&a)?;
        Ok(a)
    }
    fn identity(&self, n: usize) -> GPartWord {
        GPartWord::identity(Arc::clone(&self.group), self.leading_nu, n)
    }
    fn project(&self, a: &GPartWord, k: usize) -> Result<GPartWord> {
        a.project(k)
    }
    fn support(&self, a: &GPartWord) -> usize {
        a.values().iter().filter(|v| v.is_some()).count()
    }
}

impl CliSpace for EchelonSpace {
    fn parse(&self, v: &Value) -> Result<Echelon> {
        let a = echelon::from_json(v)?;
        self.validate(&a)?;
        Ok(a)
    }
    fn identity(&self, n: usize) -> Echelon {
        Echelon::Matrix(EchelonMatrix::identity(self.q, n))
    }
    fn project(&self, _a: &Echelon, _k: usize) -> Result<Echelon> {
        Err(Error::Domain("echelon matrices have no projection onto fewer columns".into()))
    }
    fn support(&self, a: &Echelon) -> usize {
        a.matrix().map_or(0, |m| m.entries().iter().filter(|&&x| x != 0).count())
    }
}

/// A named 2-coloring. `cylinder:D:NAME` colors `X` by `NAME` applied to `s(D, X)`.
pub fn coloring<'a, S: CliSpace>(space: &'a S, name: &str) -> Result<Box<ColorFn<'a, S::Elem>>> {
    if let Some(rest) = name.strip_prefix("cylinder:") {
        let (d, inner) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected cylinder:DEPTH:COLORING, got {name}")))?;
        let d: usize = d.parse().map_err(|_| Error::Parse(format!("bad cylinder depth {d:?}")))?;
        let g = coloring(space, inner)?;
        return Ok(Box::new(move |x| {
            let n = d.min(space.s_count(x).saturating_sub(1));
            space.s_approx(n, x).map_or(0, |y| g(&y))
        }));
    }
    Ok(match name {
        "constant" => Box::new(|_| 0),
        "parity-len" => Box::new(move |a| space.prefix_len(a) % 2),
        "support-parity" => Box::new(move |a| space.support(a) % 2),
        "depth-parity" => Box::new(move |a| space.depth(a) % 2),
        other => {
            return Err(Error::Parse(format!(
                "unknown coloring {other:?}; expected constant, parity-len, support-parity, depth-parity or cylinder:D:NAME"
            )))
        }
    })
}
