//! On-disk cache of canonical-basis elements: one JSON file per
//! (context, matrix) under the cache directory, plus `manifest.json`
//! listing every entry. Keys carry the format version, so entries written by
//! another format are ignored.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qschur::{AlgebraContext, AlgebraElement, ThetaMatrix};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "QSCHUR_CACHE_DIR";
const MANIFEST: &str = "manifest.json";

#[derive(Serialize, Deserialize, Default)]
struct Manifest {
    version: u32,
    /// key -> file name
    entries: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    key: String,
    element: AlgebraElement,
}

pub struct Cache {
    dir: PathBuf,
}

fn family_name(ctx: &AlgebraContext) -> String {
    serde_json::to_value(ctx.family)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{:?}", ctx.family))
}

fn key(kind: &str, ctx: &AlgebraContext, a: &ThetaMatrix) -> String {
    let d = ctx.d.map_or("inf".to_string(), |d| d.to_string());
    format!("v{FORMAT_VERSION}/{kind}/{}/n{}/d{d}/{a}", family_name(ctx), ctx.n)
}

fn file_name(kind: &str, ctx: &AlgebraContext, a: &ThetaMatrix) -> String {
    let d = ctx.d.map_or("inf".to_string(), |d| d.to_string());
    let entries: Vec<String> = a
        .entries()
        .iter()
        .map(|x| if *x < 0 { format!("m{}", -x) } else { x.to_string() })
        .collect();
    format!("{kind}-v{FORMAT_VERSION}-{}-n{}-d{d}-{}.json", family_name(ctx), ctx.n, entries.join("_"))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn manifest(&self) -> Manifest {
        fs::read(self.dir.join(MANIFEST))
            .ok()
            .and_then(|b| serde_json::from_slice::<Manifest>(&b).ok())
            .filter(|m| m.version == FORMAT_VERSION)
            .unwrap_or(Manifest { version: FORMAT_VERSION, entries: BTreeMap::new() })
    }

    pub fn get(&self, kind: &str, ctx: &AlgebraContext, a: &ThetaMatrix) -> Option<AlgebraElement> {
        let k = key(kind, ctx, a);
        let file = self.manifest().entries.get(&k)?.clone();
        let bytes = fs::read(self.dir.join(file)).ok()?;
        let e: Entry = serde_json::from_slice(&bytes).ok()?;
        (e.version == FORMAT_VERSION && e.key == k && e.element.context() == *ctx).then_some(e.element)
    }

    pub fn put(&self, kind: &str, ctx: &AlgebraContext, a: &ThetaMatrix, x: &AlgebraElement) -> io::Result<()> {
        let k = key(kind, ctx, a);
        let file = file_name(kind, ctx, a);
        let entry = Entry { version: FORMAT_VERSION, key: k.clone(), element: x.clone() };
        write_atomic(&self.dir.join(&file), &serde_json::to_vec_pretty(&entry)?)?;
        let mut m = self.manifest();
        m.entries.insert(k, file);
        write_atomic(&self.dir.join(MANIFEST), &serde_json::to_vec_pretty(&m)?)
    }
}
