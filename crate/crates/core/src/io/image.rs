use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageReader, Luma};

use crate::error::{Error, Result};
use crate::geometry::{DepthMap, Mask};

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = ImageReader::open(path).map_err(|e| Error::io(path, e))?;
    let reader = reader
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    if reader.format() != Some(image::ImageFormat::Png) {
        return Err(Error::Corrupt {
            path: path.to_path_buf(),
            message: "not a PNG file".into(),
        });
    }
    reader.decode().map_err(|e| Error::Corrupt {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn channel_error(path: &Path, img: &DynamicImage) -> Error {
    Error::ChannelCount {
        path: path.to_path_buf(),
        expected: 1,
        found: img.color().channel_count() as u16,
    }
}

/// 8-bit single-channel PNG; each pixel value is a region label.
pub fn load_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let path = path.as_ref();
    match decode(path)? {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            Mask::new(
                w as usize,
                h as usize,
                buf.into_raw().into_iter().map(u32::from).collect(),
            )
        }
        img if img.color().channel_count() == 1 => Err(Error::BitDepth {
            path: path.to_path_buf(),
            bits: img.color().bits_per_pixel(),
        }),
        img => Err(channel_error(path, &img)),
    }
}

/// Single-channel PNG, 16-bit (divided by 65535) or 8-bit (divided by 255).
pub fn load_depth(path: impl AsRef<Path>) -> Result<DepthMap> {
    let path = path.as_ref();
    match decode(path)? {
        DynamicImage::ImageLuma16(buf) => {
            let (w, h) = buf.dimensions();
            let values = buf
                .into_raw()
                .into_iter()
                .map(|v| v as f64 / 65535.0)
                .collect();
            DepthMap::new(w as usize, h as usize, values)
        }
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            let values = buf
                .into_raw()
                .into_iter()
                .map(|v| v as f64 / 255.0)
                .collect();
            DepthMap::new(w as usize, h as usize, values)
        }
        img if img.color().channel_count() == 1 => Err(Error::BitDepth {
            path: path.to_path_buf(),
            bits: img.color().bits_per_pixel(),
        }),
        img => Err(channel_error(path, &img)),
    }
}

fn save(img: DynamicImage, path: &Path) -> Result<()> {
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => Error::io(path, io),
            other => Error::InvalidInput(format!("{}: {other}", path.display())),
        })
}

/// Writes an 8-bit label PNG. Labels above 255 are rejected.
pub fn save_mask_png(mask: &Mask, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let raw = mask
        .labels()
        .iter()
        .map(|&l| {
            u8::try_from(l)
                .map_err(|_| Error::InvalidInput(format!("label {l} does not fit in 8 bits")))
        })
        .collect::<Result<Vec<u8>>>()?;
    let buf: ImageBuffer<Luma<u8>, _> =
        ImageBuffer::from_raw(mask.width() as u32, mask.height() as u32, raw)
            .expect("sized buffer");
    save(DynamicImage::ImageLuma8(buf), path)
}

/// Writes a 16-bit depth PNG, quantizing `[0, 1]` onto `0..=65535`.
pub fn save_depth_png(depth: &DepthMap, path: impl AsRef<Path>) -> Result<()> {
    let raw: Vec<u16> = depth
        .values()
        .iter()
        .map(|v| (v * 65535.0).round() as u16)
        .collect();
    let buf: ImageBuffer<Luma<u16>, _> =
        ImageBuffer::from_raw(depth.width() as u32, depth.height() as u32, raw)
            .expect("sized buffer");
    save(DynamicImage::ImageLuma16(buf), path.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mask.png");
        let mask = Mask::from_fn(7, 5, |x, y| ((x * y) % 4) as u32).unwrap();
        save_mask_png(&mask, &path).unwrap();
        assert_eq!(load_mask(&path).unwrap(), mask);
    }

    #[test]
    fn depth_sixteen_bit_normalization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("depth.png");
        let buf: ImageBuffer<Luma<u16>, _> =
            ImageBuffer::from_raw(3, 1, vec![0u16, 32768, 65535]).unwrap();
        DynamicImage::ImageLuma16(buf).save(&path).unwrap();
        let d = load_depth(&path).unwrap();
        assert_eq!(d.get(0, 0), 0.0);
        assert_eq!(d.get(2, 0), 1.0);
        assert_eq!(d.get(1, 0), 32768.0 / 65535.0);
    }

    #[test]
    fn depth_eight_bit_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("depth8.png");
        let buf: ImageBuffer<Luma<u8>, _> = ImageBuffer::from_raw(2, 1, vec![0u8, 255]).unwrap();
        DynamicImage::ImageLuma8(buf).save(&path).unwrap();
        let d = load_depth(&path).unwrap();
        assert_eq!(d.values(), &[0.0, 1.0]);
    }

    #[test]
    fn mask_rejects_sixteen_bit_and_rgb() {
        let dir = tempfile::tempdir().unwrap();
        let p16 = dir.path().join("m16.png");
        let buf: ImageBuffer<Luma<u16>, _> = ImageBuffer::from_raw(2, 1, vec![0u16, 1]).unwrap();
        DynamicImage::ImageLuma16(buf).save(&p16).unwrap();
        assert!(matches!(
            load_mask(&p16),
            Err(Error::BitDepth { bits: 16, .. })
        ));

        let prgb = dir.path().join("rgb.png");
        let buf: ImageBuffer<image::Rgb<u8>, _> =
            ImageBuffer::from_raw(1, 1, vec![1u8, 2, 3]).unwrap();
        DynamicImage::ImageRgb8(buf).save(&prgb).unwrap();
        assert!(matches!(
            load_mask(&prgb),
            Err(Error::ChannelCount { found: 3, .. })
        ));
        assert!(matches!(
            load_depth(&prgb),
            Err(Error::ChannelCount { found: 3, .. })
        ));
    }

    #[test]
    fn corrupt_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.png");
        std::fs::write(&bad, b"\x89PNG\r\n\x1a\nnot really").unwrap();
        assert!(matches!(load_mask(&bad), Err(Error::Corrupt { .. })));
        let text = dir.path().join("text.png");
        std::fs::write(&text, b"hello").unwrap();
        assert!(matches!(load_depth(&text), Err(Error::Corrupt { .. })));
        assert!(matches!(
            load_mask(dir.path().join("nope.png")),
            Err(Error::Io { .. })
        ));
    }
}
