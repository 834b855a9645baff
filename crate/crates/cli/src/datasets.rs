//! Benchmark datasets: download, checksum, convert to the canonical formats
//! read by the other subcommands.
//!
//! Canonical files in the data directory:
//! * `<name>.edges` or `<name>.mtx`: the graph (Matrix Market keeps isolated
//!   vertices, which edge lists cannot).
//! * `<name>.labels.csv`: `vertex,label` ground truth.
//! * `meuse.csv`: the spatial table.
//!
//! Upstream files without a published checksum are trusted on first use: the
//! digest of the first download is written to `checksums.lock` and every
//! later fetch must match it.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

use grafield::io::{read_graph, write_edge_list, write_matrix_market};
use grafield::Graph;

use crate::gml::{parse_gml, GmlGraph};
use crate::output::{stage, Artifacts};

const KARATE_EDGES: &str = include_str!("../data/karate.edges");
const KARATE_LABELS: &str = include_str!("../data/karate.labels.csv");

const MEUSE_WHEEL_URL: &str = "https://files.pythonhosted.org/packages/ab/6d/fbde958eabbaeb6e6fc2d5e84da4c317d79dda6d11259ab18c5103d59f19/scikit_gstat-1.0.24-py3-none-any.whl";
const MEUSE_WHEEL_SHA256: &str = "9f3ade609f231b5d9f99f1eb85fcf4f41b4805edbdac67567e25d200801035b7";
const MEUSE_MEMBER: &str = "skgstat/data/samples/meuse.txt";
const MEUSE_SHA256: &str = "b27776bc1cad63c4bf308923c86a5a76a0a02566ac75984b018df2a477b52f64";
const MEUSE_ROWS: usize = 155;

const LOCK_FILE: &str = "checksums.lock";

/// Error type for data problems that are not library errors, mapped to the
/// data exit code.
#[derive(Debug)]
pub struct DataError(pub String);

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DataError {}

fn data_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(DataError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dataset {
    Karate,
    Meuse,
    Polblogs,
    Football,
    Adjnoun,
    Mexican,
}

impl Dataset {
    pub fn name(self) -> &'static str {
        match self {
            Dataset::Karate => "karate",
            Dataset::Meuse => "meuse",
            Dataset::Polblogs => "polblogs",
            Dataset::Football => "football",
            Dataset::Adjnoun => "adjnoun",
            Dataset::Mexican => "mexican",
        }
    }

    /// Upstream zip of a GML network.
    fn newman_url(self) -> Option<String> {
        match self {
            Dataset::Polblogs | Dataset::Football | Dataset::Adjnoun => {
                Some(format!("http://www-personal.umich.edu/~mejn/netdata/{}.zip", self.name()))
            }
            _ => None,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn download(url: &str) -> Result<Vec<u8>> {
    // The system trust store, so that site-installed CAs are honoured.
    let tls = ureq::tls::TlsConfig::builder().root_certs(ureq::tls::RootCerts::PlatformVerifier).build();
    let agent: ureq::Agent = ureq::Agent::config_builder().tls_config(tls).build().into();
    let mut resp = agent.get(url).call().map_err(|e| data_err(format!("downloading {url}: {e}")))?;
    resp.body_mut()
        .with_config()
        .limit(200 * 1024 * 1024)
        .read_to_vec()
        .map_err(|e| data_err(format!("reading {url}: {e}")))
}

fn zip_member(bytes: &[u8], pick: impl Fn(&str) -> bool) -> Result<(String, Vec<u8>)> {
    let mut archive = zip::ZipArchive::new(Cursor::new(bytes)).context("opening zip archive")?;
    let name = archive
        .file_names()
        .filter(|n| pick(n))
        .min()
        .map(str::to_string)
        .ok_or_else(|| data_err("archive has no matching member"))?;
    let mut out = Vec::new();
    archive.by_name(&name)?.read_to_end(&mut out)?;
    Ok((name, out))
}

fn is_zip(bytes: &[u8]) -> bool {
    bytes.starts_with(b"PK\x03\x04")
}

/// `name → sha256` records for trust-on-first-use sources.
struct Lock {
    path: PathBuf,
    entries: BTreeMap<String, String>,
}

impl Lock {
    fn load(dir: &Path) -> Result<Lock> {
        let path = dir.join(LOCK_FILE);
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                let (name, digest) = line
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| data_err(format!("malformed line in {}: {line:?}", path.display())))?;
                entries.insert(name.to_string(), digest.trim().to_string());
            }
        }
        Ok(Lock { path, entries })
    }

    /// Verifies against the recorded digest, recording it when new. Returns
    /// whether the digest was newly recorded.
    fn check(&mut self, name: &str, digest: &str) -> Result<bool> {
        match self.entries.get(name) {
            Some(known) if known == digest => Ok(false),
            Some(known) => Err(data_err(format!(
                "checksum mismatch for {name}: expected {known}, got {digest}; remove the entry from {} only if the new snapshot is intended",
                self.path.display()
            ))),
            None => {
                self.entries.insert(name.to_string(), digest.to_string());
                Ok(true)
            }
        }
    }

    fn render(&self) -> String {
        let mut s = String::from("# sha256 of upstream files, recorded on first download\n");
        for (k, v) in &self.entries {
            s.push_str(&format!("{k} {v}\n"));
        }
        s
    }
}

fn verify_pinned(what: &str, bytes: &[u8], want: &str) -> Result<()> {
    let got = sha256_hex(bytes);
    if got != want {
        bail!(data_err(format!("checksum mismatch for {what}: expected {want}, got {got}")));
    }
    Ok(())
}

/// Writes all files only after every one of them has been rendered.
fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let staged: Vec<_> = files.iter().map(|(name, bytes)| Ok((name, stage(dir, bytes)?))).collect::<Result<_>>()?;
    for (name, tmp) in staged {
        tmp.persist(dir.join(name)).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

fn labels_csv(rows: impl IntoIterator<Item = (String, String)>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex", "label"])?;
    for (v, l) in rows {
        w.write_record([v, l])?;
    }
    w.into_inner().context("flushing labels")
}

/// Symmetrized graph on vertices `1..=n` in GML id order. Directed arcs add
/// their weight to both directions (`A + Aᵀ`); undirected duplicates sum.
fn gml_to_graph(gml: &GmlGraph) -> Result<(Graph, Vec<usize>)> {
    let mut ids: Vec<i64> = gml.nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != gml.nodes.len() {
        bail!(data_err("duplicate node ids in GML"));
    }
    let index = |id: i64| ids.binary_search(&id).map_err(|_| data_err(format!("edge refers to unknown node {id}")));
    let mut edges = Vec::with_capacity(gml.edges.len());
    for &(s, t, w) in &gml.edges {
        let (i, j) = (index(s)?, index(t)?);
        // A loop arc appears twice in A + Aᵀ.
        let w = if i == j && gml.directed { 2.0 * w } else { w };
        edges.push((i, j, w));
    }
    let labels = (1..=ids.len()).map(|i| i.to_string()).collect();
    let g = Graph::from_indexed(labels, &edges)?;
    let order = gml.nodes.iter().map(|n| index(n.id)).collect::<Result<Vec<_>>>()?;
    Ok((g, order))
}

#[derive(Debug, Serialize)]
struct Summary {
    dataset: &'static str,
    source: String,
    files: Vec<String>,
    sha256: Option<String>,
    checksum: &'static str,
    vertices: Option<usize>,
    edges: Option<usize>,
    edge_records: Option<usize>,
    isolated: Option<usize>,
    largest_component: Option<usize>,
    rows: Option<usize>,
}

impl Summary {
    fn new(dataset: Dataset, source: String) -> Summary {
        Summary {
            dataset: dataset.name(),
            source,
            files: Vec::new(),
            sha256: None,
            checksum: "none",
            vertices: None,
            edges: None,
            edge_records: None,
            isolated: None,
            largest_component: None,
            rows: None,
        }
    }

    fn describe(&mut self, g: &Graph) {
        self.vertices = Some(g.n());
        self.edges = Some(g.edge_count());
        self.isolated = Some(g.isolated_vertices().len());
        self.largest_component = g.connected_components().iter().map(Vec::len).max();
    }
}

pub struct FetchRequest<'a> {
    pub dataset: Dataset,
    pub dir: &'a Path,
    /// Local copy of the upstream file, used instead of downloading.
    pub from: Option<&'a Path>,
    /// Ground-truth table for datasets supplied by hand.
    pub labels: Option<&'a Path>,
}

pub fn fetch(req: &FetchRequest<'_>) -> Result<Artifacts> {
    let summary = match req.dataset {
        Dataset::Karate => fetch_karate(req)?,
        Dataset::Meuse => fetch_meuse(req)?,
        Dataset::Polblogs | Dataset::Football | Dataset::Adjnoun => fetch_newman(req)?,
        Dataset::Mexican => fetch_manual(req)?,
    };
    let mut a = Artifacts::default();
    a.set("fetch", summary);
    Ok(a)
}

fn fetch_karate(req: &FetchRequest<'_>) -> Result<Summary> {
    let mut s = Summary::new(Dataset::Karate, "built-in".into());
    let g = grafield::io::parse_edge_list(KARATE_EDGES)?;
    s.describe(&g);
    s.sha256 = Some(sha256_hex(KARATE_EDGES.as_bytes()));
    s.checksum = "built-in";
    let files = vec![
        ("karate.edges".to_string(), KARATE_EDGES.as_bytes().to_vec()),
        ("karate.labels.csv".to_string(), KARATE_LABELS.as_bytes().to_vec()),
    ];
    write_files(req.dir, &files)?;
    s.files = files.into_iter().map(|f| f.0).collect();
    Ok(s)
}

fn fetch_meuse(req: &FetchRequest<'_>) -> Result<Summary> {
    let (source, raw) = match req.from {
        Some(p) => (p.display().to_string(), std::fs::read(p).with_context(|| format!("reading {}", p.display()))?),
        None => (MEUSE_WHEEL_URL.to_string(), download(MEUSE_WHEEL_URL)?),
    };
    let mut s = Summary::new(Dataset::Meuse, source);
    let table = if is_zip(&raw) {
        verify_pinned("the scikit-gstat wheel", &raw, MEUSE_WHEEL_SHA256)?;
        zip_member(&raw, |n| n == MEUSE_MEMBER)?.1
    } else {
        raw
    };
    verify_pinned("meuse.txt", &table, MEUSE_SHA256)?;
    s.sha256 = Some(MEUSE_SHA256.into());
    s.checksum = "pinned";
    let rows = csv::Reader::from_reader(table.as_slice()).records().count();
    if rows != MEUSE_ROWS {
        bail!(data_err(format!("meuse table has {rows} rows, expected {MEUSE_ROWS}")));
    }
    s.rows = Some(rows);
    write_files(req.dir, &[("meuse.csv".into(), table)])?;
    s.files = vec!["meuse.csv".into()];
    Ok(s)
}

fn manual_steps(dataset: Dataset, url: Option<&str>) -> String {
    let name = dataset.name();
    match url {
        Some(url) => format!(
            "could not obtain {name}. Download {url} by hand and run `grafield fetch {name} --from <file>`"
        ),
        None => format!(
            "{name} has no download source. Obtain the network and its ground truth, then run \
             `grafield fetch {name} --from <graph: GML, edge list or Matrix Market> --labels <vertex,label CSV>`"
        ),
    }
}

fn fetch_newman(req: &FetchRequest<'_>) -> Result<Summary> {
    let name = req.dataset.name();
    let url = req.dataset.newman_url().expect("newman dataset");
    let (source, raw) = match req.from {
        Some(p) => (p.display().to_string(), std::fs::read(p).with_context(|| format!("reading {}", p.display()))?),
        None => match download(&url) {
            Ok(bytes) => (url.clone(), bytes),
            Err(e) => return Err(data_err(format!("{e}\n{}", manual_steps(req.dataset, Some(&url))))),
        },
    };
    let mut s = Summary::new(req.dataset, source);
    let digest = sha256_hex(&raw);
    let mut lock = Lock::load(req.dir)?;
    let recorded = lock.check(name, &digest)?;
    s.checksum = if recorded { "recorded" } else { "verified" };
    s.sha256 = Some(digest);

    let text = if is_zip(&raw) { zip_member(&raw, |n| n.ends_with(".gml"))?.1 } else { raw };
    let gml = parse_gml(&String::from_utf8_lossy(&text)).with_context(|| format!("parsing {name} GML"))?;
    let (g, order) = gml_to_graph(&gml)?;
    s.edge_records = Some(gml.edges.len());
    s.describe(&g);

    let mut labels = Vec::new();
    for (node, &i) in gml.nodes.iter().zip(&order) {
        if let Some(v) = &node.value {
            labels.push((i, v.clone()));
        }
    }
    labels.sort();
    let mut files = vec![(format!("{name}.mtx"), write_matrix_market(&g).into_bytes())];
    if !labels.is_empty() {
        let rows = labels.into_iter().map(|(i, l)| ((i + 1).to_string(), l));
        files.push((format!("{name}.labels.csv"), labels_csv(rows)?));
    }
    files.push((LOCK_FILE.into(), lock.render().into_bytes()));
    write_files(req.dir, &files)?;
    s.files = files.into_iter().map(|f| f.0).collect();
    Ok(s)
}

fn fetch_manual(req: &FetchRequest<'_>) -> Result<Summary> {
    let name = req.dataset.name();
    let path = req.from.ok_or_else(|| data_err(manual_steps(req.dataset, None)))?;
    let raw = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut s = Summary::new(req.dataset, path.display().to_string());
    let digest = sha256_hex(&raw);
    let mut lock = Lock::load(req.dir)?;
    s.checksum = if lock.check(name, &digest)? { "recorded" } else { "verified" };
    s.sha256 = Some(digest);

    let text = String::from_utf8_lossy(&raw);
    let mut files = Vec::new();
    if text.trim_start().starts_with("graph") || text.contains("\ngraph") {
        let gml = parse_gml(&text)?;
        let (g, _) = gml_to_graph(&gml)?;
        s.describe(&g);
        files.push((format!("{name}.mtx"), write_matrix_market(&g).into_bytes()));
    } else {
        let g = read_graph(path)?;
        s.describe(&g);
        files.push((format!("{name}.edges"), write_edge_list(&g).into_bytes()));
    }
    if let Some(labels) = req.labels {
        let table = grafield::io::read_labels(labels)?;
        files.push((format!("{name}.labels.csv"), labels_csv(table)?));
    }
    files.push((LOCK_FILE.into(), lock.render().into_bytes()));
    write_files(req.dir, &files)?;
    s.files = files.into_iter().map(|f| f.0).collect();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn karate_is_embedded_with_its_quartet() {
        let g = grafield::io::parse_edge_list(KARATE_EDGES).unwrap();
        assert_eq!((g.n(), g.edge_count()), (34, 78));
        let sub: Vec<usize> = ["1", "9", "31", "33"].iter().map(|l| g.index_of(l).unwrap()).collect();
        let q = g.induced_subgraph(&sub).unwrap();
        assert_eq!(q.degrees(), &[2.0, 8.0, 6.0, 6.0]);
        let labels = grafield::io::parse_labels(KARATE_LABELS).unwrap();
        assert_eq!(labels.len(), 34);
    }

    #[test]
    fn lock_records_then_verifies() {
        let dir = tempfile::tempdir().unwrap();
        let mut lock = Lock::load(dir.path()).unwrap();
        assert!(lock.check("x", "abc").unwrap());
        std::fs::write(dir.path().join(LOCK_FILE), lock.render()).unwrap();
        let mut again = Lock::load(dir.path()).unwrap();
        assert!(!again.check("x", "abc").unwrap());
        let err = again.check("x", "abd").unwrap_err();
        assert!(err.downcast_ref::<DataError>().is_some());
    }

    #[test]
    fn directed_gml_is_symmetrized() {
        let gml = parse_gml(
            "graph [ directed 1 node [ id 5 value 0 ] node [ id 7 value 1 ] node [ id 9 value 1 ] \
             edge [ source 5 target 7 ] edge [ source 7 target 5 ] edge [ source 9 target 7 ] ]",
        )
        .unwrap();
        let (g, order) = gml_to_graph(&gml).unwrap();
        assert_eq!(order, vec![0, 1, 2]);
        assert_eq!(g.weight(0, 1), 2.0);
        assert_eq!(g.weight(1, 2), 1.0);
        assert_eq!(g.degrees(), &[2.0, 3.0, 1.0]);
    }

    #[test]
    fn manual_dataset_without_file_lists_steps() {
        let dir = tempfile::tempdir().unwrap();
        let req = FetchRequest { dataset: Dataset::Mexican, dir: dir.path(), from: None, labels: None };
        let err = fetch(&req).err().unwrap();
        assert!(err.to_string().contains("--from"));
        assert!(err.downcast_ref::<DataError>().is_some());
    }

    #[test]
    fn pinned_checksum_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let fake = dir.path().join("meuse.txt");
        std::fs::write(&fake, "x,y\n1,2\n").unwrap();
        let req = FetchRequest { dataset: Dataset::Meuse, dir: dir.path(), from: Some(&fake), labels: None };
        let err = fetch(&req).err().unwrap();
        assert!(err.to_string().contains("checksum mismatch"));
        assert!(!dir.path().join("meuse.csv").exists());
    }
}
