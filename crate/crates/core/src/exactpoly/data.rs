//! Embedded polynomial constants.
//!
//! The files under `data/` are compiled into the binary. Setting `K3ATLAS_DATA`
//! to a directory makes the loader read the same file names from there instead.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;

use super::parse::{parse_data_file, Stanza, Value};
use super::poly::{Context, MPoly};
use crate::error::{Error, Result};

pub const DATA_ENV: &str = "K3ATLAS_DATA";

pub const FILES: [(&str, &str); 6] = [
    ("appendix.poly", include_str!("../../data/appendix.poly")),
    ("quintic.poly", include_str!("../../data/quintic.poly")),
    ("kummer.poly", include_str!("../../data/kummer.poly")),
    ("chain.poly", include_str!("../../data/chain.poly")),
    ("k3family.poly", include_str!("../../data/k3family.poly")),
    ("errata.poly", include_str!("../../data/errata.poly")),
];

/// All named constants, keyed by stanza name.
#[derive(Debug)]
pub struct DataSet {
    stanzas: HashMap<String, Stanza<BigInt>>,
    origin: String,
}

impl DataSet {
    /// Parses a set of (file name, contents) pairs.
    pub fn from_sources<'a>(sources: impl IntoIterator<Item = (&'a str, String)>, origin: &str) -> Result<Self> {
        let mut stanzas = HashMap::new();
        for (file, text) in sources {
            let parsed = parse_data_file::<BigInt>(&text).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("{file}: {message}"),
                },
                other => other,
            })?;
            for st in parsed {
                if stanzas.contains_key(&st.name) {
                    return Err(Error::Input(format!("{file}: constant `{}` defined twice", st.name)));
                }
                stanzas.insert(st.name.clone(), st);
            }
        }
        Ok(DataSet {
            stanzas,
            origin: origin.to_string(),
        })
    }

    pub fn embedded() -> Result<Self> {
        Self::from_sources(FILES.iter().map(|(n, t)| (*n, t.to_string())), "embedded")
    }

    pub fn from_dir(dir: &PathBuf) -> Result<Self> {
        let mut srcs = Vec::new();
        for (name, _) in FILES {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            srcs.push((name, text));
        }
        Self::from_sources(srcs, &dir.display().to_string())
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.stanzas.keys().map(|s| s.as_str())
    }

    pub fn stanza(&self, name: &str) -> Result<&Stanza<BigInt>> {
        self.stanzas
            .get(name)
            .ok_or_else(|| Error::Input(format!("no data constant named `{name}`")))
    }

    /// The polynomial stanza `name`, rewritten into `ctx`.
    pub fn poly(&self, name: &str, ctx: &Context) -> Result<MPoly> {
        match &self.stanza(name)?.value {
            Value::Poly(p) => p.embed(ctx),
            Value::List(_) => Err(Error::Input(format!("`{name}` is a list, not a polynomial"))),
        }
    }

    pub fn list(&self, name: &str, ctx: &Context) -> Result<Vec<MPoly>> {
        match &self.stanza(name)?.value {
            Value::List(v) => v.iter().map(|p| p.embed(ctx)).collect(),
            Value::Poly(_) => Err(Error::Input(format!("`{name}` is a polynomial, not a list"))),
        }
    }
}

static DATA: OnceLock<std::result::Result<DataSet, Error>> = OnceLock::new();

/// Process-wide data set, loaded on first use.
pub fn data() -> Result<&'static DataSet> {
    DATA.get_or_init(|| match std::env::var_os(DATA_ENV) {
        Some(dir) => DataSet::from_dir(&PathBuf::from(dir)),
        None => DataSet::embedded(),
    })
    .as_ref()
    .map_err(|e| e.clone())
}
