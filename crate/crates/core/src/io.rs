//! JSON documents for instances, layouts, and reports.
//!
//! Floats are written in the shortest form that parses back to the same
//! bits, so every document round-trips exactly.

use serde::{Deserialize, Serialize};

use crate::bounds::QualityReport;
use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::instance::Instance;
use crate::layout::{Layout, LayoutTree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainerDims {
    pub width: f64,
    pub height: f64,
}

/// `{"container": {"width": .., "height": ..}, "areas": [..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub container: ContainerDims,
    pub areas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectEntry {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

/// Placed pieces plus the achieved total; the cut tree is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutFile {
    pub rects: Vec<RectEntry>,
    pub total_half_perimeter: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<LayoutTree>,
}

impl LayoutFile {
    pub fn from_layout(layout: &Layout, include_tree: bool) -> LayoutFile {
        LayoutFile::from_rects(layout.rects(), include_tree.then(|| layout.tree().clone()))
    }

    pub fn from_rects(rects: &[Rect], tree: Option<LayoutTree>) -> LayoutFile {
        LayoutFile {
            rects: rects
                .iter()
                .enumerate()
                .map(|(index, r)| RectEntry {
                    index,
                    x: r.x(),
                    y: r.y(),
                    width: r.width(),
                    height: r.height(),
                })
                .collect(),
            total_half_perimeter: crate::layout::total_half_perimeter(rects),
            tree,
        }
    }

    /// Pieces ordered by index. Indices must be `0..n`, each exactly once.
    pub fn rects(&self) -> Result<Vec<Rect>> {
        let n = self.rects.len();
        let mut slots: Vec<Option<Rect>> = vec![None; n];
        for e in &self.rects {
            let slot = slots.get_mut(e.index).ok_or_else(|| {
                Error::InvalidLayout(format!("index {} out of range 0..{n}", e.index))
            })?;
            if slot
                .replace(Rect::new(e.x, e.y, e.width, e.height)?)
                .is_some()
            {
                return Err(Error::InvalidLayout(format!(
                    "index {} appears twice",
                    e.index
                )));
            }
        }
        Ok(slots
            .into_iter()
            .map(|s| s.expect("each of n indices filled once"))
            .collect())
    }

    /// The layout with its tree, when the document carries one that agrees
    /// with the flat pieces.
    pub fn layout(&self) -> Result<Option<Layout>> {
        let Some(tree) = &self.tree else {
            return Ok(None);
        };
        let layout = Layout::from_tree(tree.clone())?;
        if layout.rects() != self.rects()?.as_slice() {
            return Err(Error::InvalidLayout(
                "tree leaves disagree with rects".into(),
            ));
        }
        Ok(Some(layout))
    }
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("plain data serializes");
    out.push(b'\n');
    out
}

pub fn parse_instance(bytes: &[u8], normalize: bool) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_slice(bytes)?;
    let ContainerDims { width, height } = file.container;
    let container = Rect::with_size(width, height)?;
    Instance::new(container, file.areas, normalize)
}

/// The container's origin is not part of the document.
pub fn serialize_instance(inst: &Instance) -> Vec<u8> {
    to_json(&InstanceFile {
        container: ContainerDims {
            width: inst.container().width(),
            height: inst.container().height(),
        },
        areas: inst.areas().to_vec(),
    })
}

pub fn parse_layout(bytes: &[u8]) -> Result<LayoutFile> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn serialize_layout(file: &LayoutFile) -> Vec<u8> {
    to_json(file)
}

pub fn serialize_report(report: &QualityReport) -> Vec<u8> {
    to_json(report)
}
