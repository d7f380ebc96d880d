use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::invariants::same_fiber;
use crate::model::{parse_document, RelativeModel, SullivanModel};

/// Fibrations sharing one fiber.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub fiber: SullivanModel,
    pub entries: Vec<(String, RelativeModel)>,
    pub sources: Vec<PathBuf>,
}

impl Catalog {
    /// Checks fibers and id uniqueness. The fiber is taken from the first
    /// entry when `fiber` is `None`.
    pub fn new(
        fiber: Option<SullivanModel>,
        entries: Vec<(String, RelativeModel)>,
    ) -> Result<Self> {
        let fiber = match fiber {
            Some(f) => f,
            None => entries
                .first()
                .map(|(_, f)| f.fiber().clone())
                .ok_or_else(|| Error::Input("empty catalog needs an explicit fiber".into()))?,
        };
        let mut seen = HashSet::new();
        for (id, f) in &entries {
            if !seen.insert(id.as_str()) {
                return Err(Error::Input(format!("duplicate catalog id `{id}`")));
            }
            if !same_fiber(&fiber, f.fiber()) {
                return Err(Error::FiberMismatch(id.clone()));
            }
        }
        Ok(Catalog {
            fiber,
            entries,
            sources: Vec::new(),
        })
    }

    /// Every `[fibration]` block of the given files; directories contribute
    /// their `*.smf` files in name order.
    pub fn load<P: AsRef<Path>>(paths: &[P]) -> Result<Self> {
        let mut files = Vec::new();
        for p in paths {
            let p = p.as_ref();
            if p.is_dir() {
                let mut inner: Vec<PathBuf> = std::fs::read_dir(p)
                    .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|q| q.extension().is_some_and(|x| x == "smf"))
                    .collect();
                inner.sort();
                files.extend(inner);
            } else {
                files.push(p.to_path_buf());
            }
        }
        let mut entries = Vec::new();
        for file in &files {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Input(format!("{}: {e}", file.display())))?;
            let doc = parse_document(&text)?;
            entries.extend(doc.fibrations().map(|f| (f.name().to_string(), f.clone())));
        }
        let mut catalog = Catalog::new(None, entries)?;
        catalog.sources = files;
        Ok(catalog)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries as one model file.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(_, f)| f.to_text())
            .collect::<Vec<_>>()
            .join("\n")
    }
}
