//! Example graphs of groups shipped with the crate.

use crate::error::{Error, Result};
use crate::gog::GraphOfGroups;
use crate::gogfile::parse_spec;

pub const F2: &str = include_str!("../fixtures/f2.gog");
pub const MODULAR: &str = include_str!("../fixtures/modular.gog");
pub const BS12: &str = include_str!("../fixtures/bs12.gog");
pub const F2Z: &str = include_str!("../fixtures/f2z.gog");

pub const NAMES: [&str; 4] = ["f2", "modular", "bs12", "f2z"];

pub fn text(name: &str) -> Option<&'static str> {
    match name {
        "f2" => Some(F2),
        "modular" => Some(MODULAR),
        "bs12" => Some(BS12),
        "f2z" => Some(F2Z),
        _ => None,
    }
}

pub fn load(name: &str) -> Result<GraphOfGroups> {
    let text = text(name).ok_or_else(|| Error::Input(format!("no fixture named `{name}`")))?;
    GraphOfGroups::build(parse_spec(text, None)?)
}
