//! Textbook squarify: recursive on the remaining children, with the current
//! row carried along and laid out against the shorter side of what is left.

use albumaudit_core::Rect;

fn worst(row: &[f64], side: f64) -> f64 {
    if row.is_empty() {
        return f64::INFINITY;
    }
    let s: f64 = row.iter().sum();
    let max = row.iter().cloned().fold(f64::MIN, f64::max);
    let min = row.iter().cloned().fold(f64::MAX, f64::min);
    f64::max(side * side * max / (s * s), (s * s) / (side * side * min))
}

fn layout_row(row: &[f64], free: &mut Rect, out: &mut Vec<Rect>) {
    let s: f64 = row.iter().sum();
    if free.w >= free.h {
        let width = s / free.h;
        let mut y = free.y;
        for a in row {
            out.push(Rect::new(free.x, y, width, a / width));
            y += a / width;
        }
        free.x += width;
        free.w -= width;
    } else {
        let height = s / free.w;
        let mut x = free.x;
        for a in row {
            out.push(Rect::new(x, free.y, a / height, height));
            x += a / height;
        }
        free.y += height;
        free.h -= height;
    }
}

fn go(children: &[f64], row: Vec<f64>, free: &mut Rect, out: &mut Vec<Rect>) {
    let Some((&c, rest)) = children.split_first() else {
        layout_row(&row, free, out);
        return;
    };
    let side = free.w.min(free.h);
    let mut extended = row.clone();
    extended.push(c);
    if worst(&row, side) >= worst(&extended, side) {
        go(rest, extended, free, out);
    } else {
        layout_row(&row, free, out);
        go(children, Vec::new(), free, out);
    }
}

/// `areas` must already be sorted descending and sum to the container area.
pub fn squarify(container: Rect, areas: &[f64]) -> Vec<Rect> {
    let mut out = Vec::new();
    let mut free = container;
    go(areas, Vec::new(), &mut free, &mut out);
    out
}

/// Hand trace of the 6x4 instance: the two 6s fill a 3-wide left column,
/// 4 and 3 share a strip of height 7/3 across the top right, then 2, 2 and 1
/// split the bottom-right 3 x 5/3 strip as columns of width 1.2, 1.2, 0.6.
pub fn traced_6x4() -> Vec<Rect> {
    vec![
        Rect::new(0.0, 0.0, 3.0, 2.0),
        Rect::new(0.0, 2.0, 3.0, 2.0),
        Rect::new(3.0, 0.0, 12.0 / 7.0, 7.0 / 3.0),
        Rect::new(3.0 + 12.0 / 7.0, 0.0, 9.0 / 7.0, 7.0 / 3.0),
        Rect::new(3.0, 7.0 / 3.0, 1.2, 5.0 / 3.0),
        Rect::new(4.2, 7.0 / 3.0, 1.2, 5.0 / 3.0),
        Rect::new(5.4, 7.0 / 3.0, 0.6, 5.0 / 3.0),
    ]
}
