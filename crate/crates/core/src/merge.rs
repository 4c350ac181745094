//! Line-based three-way merge producing the naively merged version.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;
use similar::{capture_diff_slices, Algorithm, DiffOp};
use thiserror::Error;

/// Files of one program version keyed by `/`-separated relative path.
pub type Version = BTreeMap<String, String>;

/// Which input a merged line was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Origin {
    Base,
    Left,
    Right,
    /// Identical change made by both branches.
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedFile {
    pub text: String,
    /// One entry per line of `text`.
    pub origins: Vec<Origin>,
}

impl MergedFile {
    fn from_lines(lines: Vec<(&str, Origin)>) -> Self {
        let mut text = String::new();
        let mut origins = Vec::with_capacity(lines.len());
        for (l, o) in lines {
            text.push_str(l);
            origins.push(o);
        }
        MergedFile { text, origins }
    }

    /// Origin of the (1-based) line, `Base` when out of range.
    pub fn origin_of_line(&self, line: u32) -> Origin {
        self.origins
            .get((line as usize).wrapping_sub(1))
            .copied()
            .unwrap_or(Origin::Base)
    }
}

#[derive(Debug, Error)]
pub enum MergeError {
    #[error("textual conflict in {file} at {region}")]
    TextualConflict { file: String, region: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct MergeScenario {
    pub base: Version,
    pub left: Version,
    pub right: Version,
    pub am: BTreeMap<String, MergedFile>,
}

impl MergeScenario {
    pub fn am_version(&self) -> Version {
        self.am.iter().map(|(p, f)| (p.clone(), f.text.clone())).collect()
    }
}

fn lines(text: &str) -> Vec<&str> {
    text.split_inclusive('\n').collect()
}

/// For each line of `base`, the index of the line of `other` it is aligned
/// with, if any.
fn alignment(base: &[&str], other: &[&str]) -> Vec<Option<usize>> {
    let mut out = vec![None; base.len()];
    for op in capture_diff_slices(Algorithm::Myers, base, other) {
        if let DiffOp::Equal {
            old_index,
            new_index,
            len,
        } = op
        {
            for k in 0..len {
                out[old_index + k] = Some(new_index + k);
            }
        }
    }
    out
}

/// diff3 over the contents of one file. `file` only labels errors.
pub fn merge_text(file: &str, base: &str, left: &str, right: &str) -> Result<MergedFile, MergeError> {
    let (b, l, r) = (lines(base), lines(left), lines(right));
    let (al, ar) = (alignment(&b, &l), alignment(&b, &r));
    let mut syncs: Vec<(usize, usize, usize)> = (0..b.len())
        .filter_map(|i| Some((i, al[i]?, ar[i]?)))
        .collect();
    syncs.push((b.len(), l.len(), r.len()));

    let mut out: Vec<(&str, Origin)> = Vec::new();
    let (mut ib, mut il, mut ir) = (0, 0, 0);
    for (sb, sl, sr) in syncs {
        let (cb, cl, cr) = (&b[ib..sb], &l[il..sl], &r[ir..sr]);
        if cl == cb {
            let o = if cr == cb { Origin::Base } else { Origin::Right };
            out.extend(cr.iter().map(|x| (*x, o)));
        } else if cr == cb {
            out.extend(cl.iter().map(|x| (*x, Origin::Left)));
        } else if cl == cr {
            out.extend(cl.iter().map(|x| (*x, Origin::Both)));
        } else {
            return Err(MergeError::TextualConflict {
                file: file.to_string(),
                region: format!("base lines {}-{}", ib + 1, sb),
            });
        }
        if sb < b.len() {
            out.push((b[sb], Origin::Base));
        }
        (ib, il, ir) = (sb + 1, sl + 1, sr + 1);
    }
    Ok(MergedFile::from_lines(out))
}

/// Merges one file given its presence in each version. `None` means the
/// file is absent; a result of `None` means the merged version deletes it.
pub fn merge_file(
    path: &str,
    base: Option<&str>,
    left: Option<&str>,
    right: Option<&str>,
) -> Result<Option<MergedFile>, MergeError> {
    let whole = |text: &str, o: Origin| MergedFile::from_lines(lines(text).into_iter().map(|x| (x, o)).collect());
    let conflict = |what: &str| MergeError::TextualConflict {
        file: path.to_string(),
        region: what.to_string(),
    };
    Ok(match (base, left, right) {
        (_, None, None) => None,
        (None, Some(l), None) => Some(whole(l, Origin::Left)),
        (None, None, Some(r)) => Some(whole(r, Origin::Right)),
        (None, Some(l), Some(r)) if l == r => Some(whole(l, Origin::Both)),
        (None, Some(l), Some(r)) => Some(merge_text(path, "", l, r)?),
        (Some(b), None, Some(r)) | (Some(b), Some(r), None) if b == r => None,
        (Some(_), None, Some(_)) | (Some(_), Some(_), None) => {
            return Err(conflict("deleted in one branch, modified in the other"))
        }
        (Some(b), Some(l), Some(r)) => Some(merge_text(path, b, l, r)?),
    })
}

/// Merges whole versions file by file, in sorted path order.
pub fn merge_versions(base: Version, left: Version, right: Version) -> Result<MergeScenario, MergeError> {
    let paths: BTreeSet<&String> = base.keys().chain(left.keys()).chain(right.keys()).collect();
    let mut am = BTreeMap::new();
    for p in paths {
        let (b, l, r) = (
            base.get(p).map(String::as_str),
            left.get(p).map(String::as_str),
            right.get(p).map(String::as_str),
        );
        if let Some(f) = merge_file(p, b, l, r)? {
            am.insert(p.clone(), f);
        }
    }
    Ok(MergeScenario {
        base,
        left,
        right,
        am,
    })
}

/// Reads every `.java` file under `dir`.
pub fn load_version(dir: &Path) -> Result<Version, MergeError> {
    let io = |path: &Path, source| MergeError::Io {
        path: path.display().to_string(),
        source,
    };
    if !dir.is_dir() {
        return Err(io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let mut out = Version::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| io(dir, e.into()))?;
        let p = entry.path();
        if entry.file_type().is_file() && p.extension().is_some_and(|e| e == "java") {
            let rel = p.strip_prefix(dir).unwrap_or(p);
            let key = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/");
            let text = std::fs::read_to_string(p).map_err(|e| io(p, e))?;
            out.insert(key, text);
        }
    }
    Ok(out)
}

pub fn merge_scenario(base: &Path, left: &Path, right: &Path) -> Result<MergeScenario, MergeError> {
    merge_versions(load_version(base)?, load_version(left)?, load_version(right)?)
}

/// Writes a version below `dir`, creating directories as needed.
pub fn write_version<'a>(
    dir: &Path,
    files: impl IntoIterator<Item = (&'a String, &'a String)>,
) -> std::io::Result<()> {
    for (rel, text) in files {
        let p = dir.join(rel);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(p, text)?;
    }
    Ok(())
}
