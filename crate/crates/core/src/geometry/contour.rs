use super::types::{Contour, Mask, Point};

/// Moore neighbourhood, clockwise in image coordinates starting at west.
const NEIGHBOURS: [(i32, i32); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

/// One 4-connected component of a single mask label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub label: u32,
    /// Pixel count.
    pub area: u64,
    /// First pixel of the component in raster order (top-most, then left-most).
    pub start: Point,
}

/// Component labelling of a mask: `ids[y * width + x]` is the 1-based index
/// into `components`, or 0 for background.
#[derive(Debug, Clone)]
pub struct Components {
    pub width: usize,
    pub height: usize,
    pub ids: Vec<u32>,
    pub components: Vec<Component>,
}

/// Splits every positive label into its 4-connected components.
pub fn label_components(mask: &Mask) -> Components {
    let (width, height) = mask.dims();
    let labels = mask.labels();
    let mut ids = vec![0u32; labels.len()];
    let mut components = Vec::new();
    let mut stack = Vec::new();

    for start in 0..labels.len() {
        let label = labels[start];
        if label == 0 || ids[start] != 0 {
            continue;
        }
        components.push(Component {
            label,
            area: 0,
            start: Point::new((start % width) as i32, (start / width) as i32),
        });
        let id = components.len() as u32;
        let mut area = 0u64;
        ids[start] = id;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            area += 1;
            let (x, y) = (idx % width, idx / width);
            let mut visit = |n: usize| {
                if labels[n] == label && ids[n] == 0 {
                    ids[n] = id;
                    stack.push(n);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < width {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - width);
            }
            if y + 1 < height {
                visit(idx + width);
            }
        }
        components.last_mut().unwrap().area = area;
    }

    Components {
        width,
        height,
        ids,
        components,
    }
}

/// Traces the outer boundary of component `index` (0-based) with Moore
/// neighbour tracing and Jacob's stopping rule. The returned points are in
/// clockwise image order starting at the component's raster-first pixel; the
/// start point is not repeated at the end. Pixels on one-pixel-wide parts are
/// visited once per side.
pub fn trace_component(components: &Components, index: usize) -> Contour {
    let Components {
        width,
        height,
        ids,
        components: comps,
    } = components;
    let (width, height) = (*width as i32, *height as i32);
    let id = index as u32 + 1;
    let start = comps[index].start;
    let inside = |p: Point| {
        p.x >= 0
            && p.y >= 0
            && p.x < width
            && p.y < height
            && ids[(p.y * width + p.x) as usize] == id
    };

    let mut points = vec![start];
    let mut current = start;
    // Raster order guarantees the west neighbour of the start is outside.
    let mut backtrack = 0usize;
    let mut first_move = None;
    // Every boundary pixel is entered at most once from each of its 8 sides.
    let limit = 8 * comps[index].area as usize + 8;

    for _ in 0..limit {
        let step = (1..=8).map(|i| (backtrack + i) % 8).find(|&d| {
            let (dx, dy) = NEIGHBOURS[d];
            inside(current.translate(dx, dy))
        });
        let Some(dir) = step else {
            // Isolated pixel.
            break;
        };
        if current == start {
            match first_move {
                Some(d0) if d0 == dir => break,
                None => first_move = Some(dir),
                _ => {}
            }
        }
        let (dx, dy) = NEIGHBOURS[dir];
        current = current.translate(dx, dy);
        // The last outside neighbour examined, seen from the new pixel.
        backtrack = if dir % 2 == 0 {
            (dir + 6) % 8
        } else {
            (dir + 5) % 8
        };
        points.push(current);
    }

    if points.len() > 1 && points.last() == Some(&start) {
        points.pop();
    }
    Contour::new(points)
}

/// One contour per 4-connected component of every positive label, in raster
/// order of the components' first pixels.
///
/// Components are not filtered by size here; a one- or two-pixel component
/// yields a contour with fewer than three points.
pub fn extract_contours(mask: &Mask) -> Vec<(u32, Contour)> {
    let components = label_components(mask);
    (0..components.components.len())
        .map(|i| {
            (
                components.components[i].label,
                trace_component(&components, i),
            )
        })
        .collect()
}
