//! IDX dataset files (the MNIST byte layout) and the in-memory dataset.
//!
//! Both files are big-endian: images carry magic `0x00000803` followed by
//! `n`, `rows`, `cols` and `n*rows*cols` unsigned bytes; labels carry magic
//! `0x00000801`, `n`, and `n` bytes. Pixels are scaled to `[0, 1]` by
//! dividing by 255.

use std::path::Path;

use byteorder::{BigEndian, ByteOrder};

use crate::error::Error;
use crate::Result;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// Which half of the dataset a `Dataset` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

/// A labeled image set, pixels flattened row-major and scaled to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Dataset {
    images: Vec<f64>,
    labels: Vec<u8>,
    pixels_per_image: usize,
    split: Split,
}

impl Dataset {
    /// Loads an image/label file pair.
    pub fn load(images_path: &Path, labels_path: &Path, split: Split) -> Result<Dataset> {
        let (images, pixels_per_image) = read_images(images_path)?;
        let labels = read_labels(labels_path)?;
        let n_images = images.len() / pixels_per_image;
        if n_images != labels.len() {
            return Err(Error::CountMismatch {
                images: n_images,
                labels: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 9) {
            return Err(Error::config(format!(
                "label value {bad} outside 0..=9"
            )));
        }
        Ok(Dataset {
            images,
            labels,
            pixels_per_image,
            split,
        })
    }

    /// Builds a dataset from already-scaled pixel rows. Intended for tests
    /// and synthetic data.
    pub fn from_parts(
        images: Vec<f64>,
        labels: Vec<u8>,
        pixels_per_image: usize,
        split: Split,
    ) -> Result<Dataset> {
        if pixels_per_image == 0 || images.len() % pixels_per_image != 0 {
            return Err(Error::config("image buffer not a multiple of image size"));
        }
        let n = images.len() / pixels_per_image;
        if n != labels.len() {
            return Err(Error::CountMismatch {
                images: n,
                labels: labels.len(),
            });
        }
        if images.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::config("pixel outside [0, 1]"));
        }
        Ok(Dataset {
            images,
            labels,
            pixels_per_image,
            split,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn pixels_per_image(&self) -> usize {
        self.pixels_per_image
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn image(&self, idx: usize) -> &[f64] {
        let start = idx * self.pixels_per_image;
        &self.images[start..start + self.pixels_per_image]
    }

    pub fn label(&self, idx: usize) -> u8 {
        self.labels[idx]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// First `n` samples as a new dataset; handy for reduced-scale runs.
    pub fn head(&self, n: usize) -> Dataset {
        let n = n.min(self.len());
        Dataset {
            images: self.images[..n * self.pixels_per_image].to_vec(),
            labels: self.labels[..n].to_vec(),
            pixels_per_image: self.pixels_per_image,
            split: self.split,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn need(buf: &[u8], offset: usize, len: usize, path: &Path, field: &'static str) -> Result<()> {
    if buf.len() < offset + len {
        Err(Error::IdxTruncated {
            path: path.display().to_string(),
            field,
            needed: offset + len,
            available: buf.len(),
        })
    } else {
        Ok(())
    }
}

fn read_images(path: &Path) -> Result<(Vec<f64>, usize)> {
    let buf = read_file(path)?;
    need(&buf, 0, 16, path, "image header")?;
    let magic = BigEndian::read_u32(&buf[0..4]);
    if magic != IMAGES_MAGIC {
        return Err(Error::IdxMagic {
            path: path.display().to_string(),
            field: "image magic",
            expected: IMAGES_MAGIC,
            got: magic,
        });
    }
    let n = BigEndian::read_u32(&buf[4..8]) as usize;
    let rows = BigEndian::read_u32(&buf[8..12]) as usize;
    let cols = BigEndian::read_u32(&buf[12..16]) as usize;
    let pixels = rows * cols;
    need(&buf, 16, n * pixels, path, "image data")?;
    let images = buf[16..16 + n * pixels]
        .iter()
        .map(|&b| f64::from(b) / 255.0)
        .collect();
    Ok((images, pixels))
}

fn read_labels(path: &Path) -> Result<Vec<u8>> {
    let buf = read_file(path)?;
    need(&buf, 0, 8, path, "label header")?;
    let magic = BigEndian::read_u32(&buf[0..4]);
    if magic != LABELS_MAGIC {
        return Err(Error::IdxMagic {
            path: path.display().to_string(),
            field: "label magic",
            expected: LABELS_MAGIC,
            got: magic,
        });
    }
    let n = BigEndian::read_u32(&buf[4..8]) as usize;
    need(&buf, 8, n, path, "label data")?;
    Ok(buf[8..8 + n].to_vec())
}

/// Standard file names inside an MNIST directory.
pub fn mnist_paths(dir: &Path) -> [(std::path::PathBuf, std::path::PathBuf, Split); 2] {
    [
        (
            dir.join("train-images-idx3-ubyte"),
            dir.join("train-labels-idx1-ubyte"),
            Split::Train,
        ),
        (
            dir.join("t10k-images-idx3-ubyte"),
            dir.join("t10k-labels-idx1-ubyte"),
            Split::Test,
        ),
    ]
}

/// Loads the train split from an MNIST directory.
pub fn load_mnist_train(dir: &Path) -> Result<Dataset> {
    let [(ti, tl, split), _] = mnist_paths(dir);
    Dataset::load(&ti, &tl, split)
}

/// Loads the test split from an MNIST directory.
pub fn load_mnist_test(dir: &Path) -> Result<Dataset> {
    let [_, (ti, tl, split)] = mnist_paths(dir);
    Dataset::load(&ti, &tl, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_images(path: &Path, magic: u32, n: u32, rows: u32, cols: u32, data: &[u8]) {
        let mut f = std::fs::File::create(path).unwrap();
        for v in [magic, n, rows, cols] {
            f.write_all(&v.to_be_bytes()).unwrap();
        }
        f.write_all(data).unwrap();
    }

    fn write_labels(path: &Path, magic: u32, data: &[u8]) {
        let mut f = std::fs::File::create(path).unwrap();
        f.write_all(&magic.to_be_bytes()).unwrap();
        f.write_all(&(data.len() as u32).to_be_bytes()).unwrap();
        f.write_all(data).unwrap();
    }

    #[test]
    fn parses_a_tiny_idx_pair() {
        let dir = std::env::temp_dir().join("onn_idx_ok");
        std::fs::create_dir_all(&dir).unwrap();
        let img = dir.join("img");
        let lbl = dir.join("lbl");
        write_images(&img, IMAGES_MAGIC, 2, 2, 2, &[0, 51, 102, 255, 255, 204, 153, 0]);
        write_labels(&lbl, LABELS_MAGIC, &[3, 7]);
        let ds = Dataset::load(&img, &lbl, Split::Train).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.pixels_per_image(), 4);
        assert_eq!(ds.label(0), 3);
        assert_eq!(ds.image(0), &[0.0, 0.2, 0.4, 1.0]);
        assert_eq!(ds.image(1)[3], 0.0);
    }

    #[test]
    fn wrong_magic_is_reported_as_such() {
        let dir = std::env::temp_dir().join("onn_idx_magic");
        std::fs::create_dir_all(&dir).unwrap();
        let img = dir.join("img");
        let lbl = dir.join("lbl");
        // Label magic in the image file.
        write_images(&img, LABELS_MAGIC, 1, 2, 2, &[0, 0, 0, 0]);
        write_labels(&lbl, LABELS_MAGIC, &[1]);
        let err = Dataset::load(&img, &lbl, Split::Train).unwrap_err();
        match err {
            Error::IdxMagic { got, expected, .. } => {
                assert_eq!(got, LABELS_MAGIC);
                assert_eq!(expected, IMAGES_MAGIC);
            }
            other => panic!("expected IdxMagic, got {other:?}"),
        }
    }

    #[test]
    fn truncated_payload_is_detected() {
        let dir = std::env::temp_dir().join("onn_idx_trunc");
        std::fs::create_dir_all(&dir).unwrap();
        let img = dir.join("img");
        let lbl = dir.join("lbl");
        // Header promises 2 images of 4 pixels but only 5 bytes follow.
        write_images(&img, IMAGES_MAGIC, 2, 2, 2, &[1, 2, 3, 4, 5]);
        write_labels(&lbl, LABELS_MAGIC, &[1, 2]);
        let err = Dataset::load(&img, &lbl, Split::Train).unwrap_err();
        assert!(matches!(err, Error::IdxTruncated { .. }), "{err:?}");
    }

    #[test]
    fn count_mismatch_is_detected() {
        let dir = std::env::temp_dir().join("onn_idx_count");
        std::fs::create_dir_all(&dir).unwrap();
        let img = dir.join("img");
        let lbl = dir.join("lbl");
        write_images(&img, IMAGES_MAGIC, 1, 2, 2, &[1, 2, 3, 4]);
        write_labels(&lbl, LABELS_MAGIC, &[1, 2, 3]);
        let err = Dataset::load(&img, &lbl, Split::Train).unwrap_err();
        assert!(matches!(
            err,
            Error::CountMismatch {
                images: 1,
                labels: 3
            }
        ));
    }
}
