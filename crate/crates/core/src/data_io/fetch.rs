//! Fashion MNIST download with pinned checksums and a local cache.
//!
//! Files are verified against their MD5 on every load; a cached copy that
//! verifies is used without touching the network.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use flate2::read::GzDecoder;
use md5::{Digest, Md5};
use ndarray::Array2;

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

pub const FASHION_MNIST_URL: &str = "http://fashion-mnist.s3-website.eu-central-1.amazonaws.com/";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemoteFile {
    pub name: String,
    pub md5: String,
}

impl RemoteFile {
    pub fn new(name: &str, md5: &str) -> Self {
        Self {
            name: name.into(),
            md5: md5.into(),
        }
    }
}

/// Where the four IDX archives come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchSource {
    pub base_url: String,
    pub train_images: RemoteFile,
    pub train_labels: RemoteFile,
    pub test_images: RemoteFile,
    pub test_labels: RemoteFile,
    pub timeout: Duration,
}

impl FetchSource {
    pub fn fashion_mnist() -> Self {
        Self {
            base_url: FASHION_MNIST_URL.into(),
            train_images: RemoteFile::new("train-images-idx3-ubyte.gz", "8d4fb7e6c68d591d4c3dfef9ec88bf0d"),
            train_labels: RemoteFile::new("train-labels-idx1-ubyte.gz", "25c81989df183df01b3e8a0aad5dffbe"),
            test_images: RemoteFile::new("t10k-images-idx3-ubyte.gz", "bef4ecab320f06d8554ea6380940ec79"),
            test_labels: RemoteFile::new("t10k-labels-idx1-ubyte.gz", "bb300cfdad3c16e7a12a480ee83cd310"),
            timeout: Duration::from_secs(300),
        }
    }
}

impl Default for FetchSource {
    fn default() -> Self {
        Self::fashion_mnist()
    }
}

fn md5_hex(bytes: &[u8]) -> String {
    Md5::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn download(url: &str, dest: &Path, timeout: Duration) -> Result<()> {
    let fail = |reason: String| Error::Download {
        url: url.to_string(),
        reason,
    };
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .build()
        .into();
    let response = agent.get(url).call().map_err(|e| fail(e.to_string()))?;
    let mut reader = response.into_body().into_reader();
    let mut file = fs::File::create(dest).map_err(|e| Error::io(dest, e))?;
    let copied = std::io::copy(&mut reader, &mut file);
    let flushed = copied.and_then(|_| file.flush());
    if let Err(e) = flushed {
        let _ = fs::remove_file(dest);
        return Err(fail(e.to_string()));
    }
    Ok(())
}

/// Path of a verified copy of `file` in `cache_dir`, downloading it if absent.
pub fn ensure_file(source: &FetchSource, file: &RemoteFile, cache_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(cache_dir).map_err(|e| Error::io(cache_dir, e))?;
    let path = cache_dir.join(&file.name);
    if !path.exists() {
        let url = format!("{}/{}", source.base_url.trim_end_matches('/'), file.name);
        log::info!("downloading {url}");
        let partial = cache_dir.join(format!("{}.partial", file.name));
        download(&url, &partial, source.timeout)?;
        let bytes = fs::read(&partial).map_err(|e| Error::io(&partial, e))?;
        let actual = md5_hex(&bytes);
        if actual != file.md5 {
            let _ = fs::remove_file(&partial);
            return Err(Error::ChecksumMismatch {
                file: file.name.clone(),
                expected: file.md5.clone(),
                actual,
            });
        }
        fs::rename(&partial, &path).map_err(|e| Error::io(&path, e))?;
    }
    Ok(path)
}

fn read_verified(path: &Path, file: &RemoteFile) -> Result<Vec<u8>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let actual = md5_hex(&bytes);
    if actual != file.md5 {
        return Err(Error::ChecksumMismatch {
            file: path.display().to_string(),
            expected: file.md5.clone(),
            actual,
        });
    }
    let mut out = Vec::new();
    GzDecoder::new(bytes.as_slice())
        .read_to_end(&mut out)
        .map_err(|e| malformed(&file.name, format!("gzip: {e}")))?;
    Ok(out)
}

fn malformed(file: &str, reason: impl Into<String>) -> Error {
    Error::MalformedDataset {
        file: file.to_string(),
        reason: reason.into(),
    }
}

fn be_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_be_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// First `limit` images of an IDX3 file as rows scaled to `[0, 1]`.
pub fn parse_idx_images(bytes: &[u8], name: &str, limit: usize) -> Result<Array2<f64>> {
    if bytes.len() < 16 || be_u32(bytes, 0) != 0x0803 {
        return Err(malformed(name, "not an IDX3 image file"));
    }
    let count = be_u32(bytes, 4) as usize;
    let pixels = be_u32(bytes, 8) as usize * be_u32(bytes, 12) as usize;
    let take = count.min(limit);
    let body = &bytes[16..];
    if body.len() < take * pixels {
        return Err(malformed(name, "image payload shorter than declared"));
    }
    let values = body[..take * pixels].iter().map(|&b| f64::from(b) / 255.0).collect();
    Ok(Array2::from_shape_vec((take, pixels), values).expect("length checked"))
}

/// First `limit` labels of an IDX1 file.
pub fn parse_idx_labels(bytes: &[u8], name: &str, limit: usize) -> Result<Vec<usize>> {
    if bytes.len() < 8 || be_u32(bytes, 0) != 0x0801 {
        return Err(malformed(name, "not an IDX1 label file"));
    }
    let count = be_u32(bytes, 4) as usize;
    let take = count.min(limit);
    let body = &bytes[8..];
    if body.len() < take {
        return Err(malformed(name, "label payload shorter than declared"));
    }
    Ok(body[..take].iter().map(|&b| usize::from(b)).collect())
}

fn load_pair(
    source: &FetchSource,
    images: &RemoteFile,
    labels: &RemoteFile,
    cache_dir: &Path,
    limit: usize,
) -> Result<LabeledDataset<f64>> {
    let ip = ensure_file(source, images, cache_dir)?;
    let lp = ensure_file(source, labels, cache_dir)?;
    let x = parse_idx_images(&read_verified(&ip, images)?, &images.name, limit)?;
    let y = parse_idx_labels(&read_verified(&lp, labels)?, &labels.name, limit)?;
    if x.nrows() < limit || y.len() < limit {
        return Err(malformed(
            &images.name,
            format!("requested {limit} rows, file has {} images and {} labels", x.nrows(), y.len()),
        ));
    }
    LabeledDataset::new(x, y, 10)
}

/// The first `n_train` training and first `n_test` test images, flattened
/// to 784 features in `[0, 1]`, ten classes.
pub fn fashion_mnist_subset(
    source: &FetchSource,
    cache_dir: &Path,
    n_train: usize,
    n_test: usize,
) -> Result<(LabeledDataset<f64>, LabeledDataset<f64>)> {
    if n_train == 0 || n_test == 0 {
        return Err(Error::InvalidDimension {
            what: "fashion mnist subset size",
            value: 0,
        });
    }
    let train = load_pair(source, &source.train_images, &source.train_labels, cache_dir, n_train)?;
    let test = load_pair(source, &source.test_images, &source.test_labels, cache_dir, n_test)?;
    Ok((train, test))
}
