//! Android IME resource generation.
//!
//! A layout becomes five XML files: the IME descriptor listing keyboard
//! variants, a keyboard fragment tying a layout grid to a keymapping and a
//! softkey list, the grid itself (shared between languages with the same
//! row shape), the keymapping (default and `SHIFT` states), and the softkey
//! definitions. Registry entries for the shared id lists go into
//! `manifest.tsv` next to the per-language directories.
//!
//! ```text
//! out/
//!   manifest.tsv
//!   kl/xml/ime_kl.xml
//!   kl/xml/keyboard_fragment_kl.xml
//!   kl/xml/keymapping_kl.xml
//!   kl/xml/softkeys_kl.xml
//!   kl/xml/layout_grid_10_10_9_4.xml
//! ```

mod key_id;
mod xml;

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub use self::key_id::{key_id_for, special_key_id, KeyId, KeyIdError};
pub use self::xml::{
    assign_key_ids, escape_attr, grid_shape, ime_xml, keyboard_xml, keymapping_xml,
    layout_grid_xml, resource_suffix, row_key_counts, row_weights, softkeys_xml, view_position_id,
    KeyAction, KeyAssignment, SoftkeyDef, SPLITTER, STANDARD_VARIANTS,
};

use crate::layout::Layout;

pub const MANIFEST_FILE: &str = "manifest.tsv";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitConfig {
    /// Suffix of the IME `string_id`; defaults to the resource form of the
    /// language tag.
    pub ime_name: Option<String>,
    /// Language-specific keyboard variant; defaults to the base layout name.
    pub variant: Option<String>,
    /// Shared keyboard merged into the language-specific variant; defaults
    /// to the variant name.
    pub variant_keyboard: Option<String>,
    pub ascii_capable: bool,
    pub auto_capital: bool,
    /// Overwrite existing files whose content differs.
    pub force: bool,
}

impl Default for EmitConfig {
    fn default() -> Self {
        EmitConfig {
            ime_name: None,
            variant: None,
            variant_keyboard: None,
            ascii_capable: true,
            auto_capital: true,
            force: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("layout has no rows")]
    NoRows,
    #[error("layout row {0} has no keys")]
    EmptyRow(usize),
    #[error(transparent)]
    KeyId(KeyIdError),
    #[error("long-press list of `{key}` contains the splitter `,`")]
    SplitterInLongPress { key: String },
    #[error("{} already exists with different content (use --force to overwrite)", .0.display())]
    Conflict(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{line}: malformed manifest row", path.display())]
    BadManifest { path: PathBuf, line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FileRole {
    Ime,
    Keyboard,
    LayoutGrid,
    Keymapping,
    Softkeys,
}

impl FileRole {
    pub const ALL: [FileRole; 5] = [
        FileRole::Ime,
        FileRole::Keyboard,
        FileRole::LayoutGrid,
        FileRole::Keymapping,
        FileRole::Softkeys,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FileRole::Ime => "ime",
            FileRole::Keyboard => "keyboard",
            FileRole::LayoutGrid => "layout_grid",
            FileRole::Keymapping => "keymapping",
            FileRole::Softkeys => "softkeys",
        }
    }

    fn from_label(s: &str) -> Option<FileRole> {
        FileRole::ALL.into_iter().find(|r| r.label() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFile {
    pub role: FileRole,
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
    /// Written by an earlier package and reused here.
    pub shared: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RegistryEntry {
    pub list: String,
    pub id: String,
}

impl fmt::Display for RegistryEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.list, self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitManifest {
    pub language_tag: String,
    pub files: Vec<EmittedFile>,
    pub registry_entries: Vec<RegistryEntry>,
}

impl EmitManifest {
    pub fn file(&self, role: FileRole) -> Option<&EmittedFile> {
        self.files.iter().find(|f| f.role == role)
    }

    fn rows(&self) -> Vec<String> {
        let tag = &self.language_tag;
        let mut rows: Vec<String> = self
            .files
            .iter()
            .map(|f| {
                format!(
                    "{tag}\tfile\t{}\t{}\t{}\t{}\t{}",
                    f.role.label(),
                    f.path,
                    f.bytes,
                    f.sha256,
                    if f.shared { "shared" } else { "new" }
                )
            })
            .collect();
        rows.extend(
            self.registry_entries
                .iter()
                .map(|e| format!("{tag}\tregistry\t{}\t{}", e.list, e.id)),
        );
        rows
    }
}

/// The five file bodies for a layout, keyed by role.
pub fn render_package(
    layout: &Layout,
    config: &EmitConfig,
) -> Result<Vec<(FileRole, String)>, EmitError> {
    Ok(vec![
        (FileRole::Ime, ime_xml(layout, config)),
        (FileRole::Keyboard, keyboard_xml(layout)?),
        (FileRole::LayoutGrid, layout_grid_xml(layout)?),
        (FileRole::Keymapping, keymapping_xml(layout)?),
        (FileRole::Softkeys, softkeys_xml(layout)?),
    ])
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn file_name(role: FileRole, res: &str, shape: &str) -> String {
    match role {
        FileRole::Ime => format!("ime_{res}.xml"),
        FileRole::Keyboard => format!("keyboard_fragment_{res}.xml"),
        FileRole::LayoutGrid => format!("layout_grid_{shape}.xml"),
        FileRole::Keymapping => format!("keymapping_{res}.xml"),
        FileRole::Softkeys => format!("softkeys_{res}.xml"),
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> EmitError + '_ {
    move |source| EmitError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Writes the package for `layout` under `outdir/<tag>/xml/` and updates
/// `outdir/manifest.tsv`, replacing any earlier rows for the same tag.
///
/// Files that already exist with identical bytes are left alone; differing
/// ones are a conflict unless `config.force` is set. A grid file already
/// written for another language with the same shape is reused.
pub fn emit_package(
    layout: &Layout,
    config: &EmitConfig,
    outdir: &Path,
) -> Result<EmitManifest, EmitError> {
    let tag = layout.language_tag.clone();
    let res = resource_suffix(&tag);
    let shape = grid_shape(layout)?;
    let bodies = render_package(layout, config)?;

    let manifest_path = outdir.join(MANIFEST_FILE);
    let existing_rows = read_manifest_rows(&manifest_path)?;
    let shared_grid = find_shared_grid(outdir, &existing_rows, &tag, &shape, &bodies)?;

    let mut planned = Vec::with_capacity(bodies.len());
    for (role, body) in &bodies {
        let (rel, shared) = match (&shared_grid, role) {
            (Some(path), FileRole::LayoutGrid) => (path.clone(), true),
            _ => (
                format!("{tag}/xml/{}", file_name(*role, &res, &shape)),
                false,
            ),
        };
        let abs = outdir.join(&rel);
        if !shared {
            match fs::read(&abs) {
                Ok(current) if current != body.as_bytes() && !config.force => {
                    return Err(EmitError::Conflict(abs));
                }
                Ok(_) | Err(_) => {}
            }
        }
        planned.push((*role, rel, abs, body, shared));
    }

    let mut files = Vec::with_capacity(planned.len());
    for (role, rel, abs, body, shared) in planned {
        if !shared {
            if let Some(dir) = abs.parent() {
                fs::create_dir_all(dir).map_err(io_err(dir))?;
            }
            let unchanged = fs::read(&abs).is_ok_and(|c| c == body.as_bytes());
            if !unchanged {
                fs::write(&abs, body).map_err(io_err(&abs))?;
            }
        }
        files.push(EmittedFile {
            role,
            path: rel,
            bytes: body.len() as u64,
            sha256: sha256_hex(body.as_bytes()),
            shared,
        });
    }

    let manifest = EmitManifest {
        registry_entries: registry_entries(layout, &res, &shape)?,
        language_tag: tag.clone(),
        files,
    };

    let mut rows: Vec<String> = existing_rows
        .into_iter()
        .filter(|r| r.first().map(String::as_str) != Some(tag.as_str()))
        .map(|r| r.join("\t"))
        .collect();
    rows.extend(manifest.rows());
    let mut text = String::from("# tag\tkind\tfields...\n");
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::create_dir_all(outdir).map_err(io_err(outdir))?;
    fs::write(&manifest_path, text).map_err(io_err(&manifest_path))?;
    Ok(manifest)
}

fn registry_entries(
    layout: &Layout,
    res: &str,
    shape: &str,
) -> Result<Vec<RegistryEntry>, EmitError> {
    let entry = |list: &str, id: String| RegistryEntry {
        list: list.to_owned(),
        id,
    };
    let mut entries = vec![
        entry("ime_list", format!("@xml/ime_{res}")),
        entry("keyboard_ids", format!("@xml/keyboard_fragment_{res}")),
        entry("layout_ids", format!("@layout/grid_{shape}")),
    ];
    for def in assign_key_ids(layout)?.softkeys {
        entries.push(entry("softkey_ids", format!("@id/{}", def.id)));
    }
    Ok(entries)
}

fn read_manifest_rows(path: &Path) -> Result<Vec<Vec<String>>, EmitError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(str::to_owned).collect();
        let ok = match fields.get(1).map(String::as_str) {
            Some("file") => fields.len() == 7 && FileRole::from_label(&fields[2]).is_some(),
            Some("registry") => fields.len() == 4,
            _ => false,
        };
        if !ok {
            return Err(EmitError::BadManifest {
                path: path.to_owned(),
                line: i + 1,
            });
        }
        rows.push(fields);
    }
    Ok(rows)
}

/// A grid written by another language with this shape and identical bytes.
fn find_shared_grid(
    outdir: &Path,
    rows: &[Vec<String>],
    tag: &str,
    shape: &str,
    bodies: &[(FileRole, String)],
) -> Result<Option<String>, EmitError> {
    let grid_body = bodies
        .iter()
        .find(|(r, _)| *r == FileRole::LayoutGrid)
        .map(|(_, b)| b.as_bytes())
        .unwrap_or_default();
    let wanted_name = format!("layout_grid_{shape}.xml");
    for row in rows {
        if row[0] == tag || row[1] != "file" || row[2] != FileRole::LayoutGrid.label() {
            continue;
        }
        let rel = &row[3];
        if !rel.ends_with(&wanted_name) {
            continue;
        }
        if fs::read(outdir.join(rel)).is_ok_and(|c| c == grid_body) {
            return Ok(Some(rel.clone()));
        }
    }
    Ok(None)
}
