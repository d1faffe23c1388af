/** The three plot kinds, each a pure function from parsed CSVs to SVG text. */

import { TrajectoryTable, column } from "./csv.js";
import { Mapper, PALETTE, boundsOf, document, marker, polyline, segment } from "./svg.js";

export type PlotKind = "phase_portrait" | "trajectory_3d" | "swimmer_path";

export const PLOT_KINDS: PlotKind[] = ["phase_portrait", "trajectory_3d", "swimmer_path"];

function zip(xs: number[], ys: number[]): Array<[number, number]> {
  return xs.map((x, i) => [x, ys[i]]);
}

/** (x, y) trace: a spiral into the equilibrium or onto the forced cycle. */
export function renderPhasePortrait(tables: TrajectoryTable[]): string {
  const traces = tables.map((t) => zip(column(t, "x"), column(t, "y")));
  const mapper = new Mapper(boundsOf(traces.flat()), true);
  const body: string[] = [];
  traces.forEach((pts, i) => {
    const color = PALETTE[i % PALETTE.length];
    body.push(polyline(mapper, pts, color));
    body.push(marker(mapper, pts[0], color));
  });
  return document(body, "x", "y", "phase portrait");
}

const ISO_C = Math.cos(Math.PI / 6);
const ISO_S = Math.sin(Math.PI / 6);

/** Isometric view of (x, y, z): relative limit cycles appear as helices. */
export function renderTrajectory3d(tables: TrajectoryTable[]): string {
  const traces = tables.map((t) => {
    const xs = column(t, "x");
    const ys = column(t, "y");
    const zs = column(t, "z");
    return xs.map((x, i): [number, number] => [
      (x - ys[i]) * ISO_C,
      zs[i] + (x + ys[i]) * ISO_S,
    ]);
  });
  const mapper = new Mapper(boundsOf(traces.flat()), false);
  const body: string[] = [];
  traces.forEach((pts, i) => {
    const color = PALETTE[i % PALETTE.length];
    body.push(polyline(mapper, pts, color));
    body.push(marker(mapper, pts[0], color));
  });
  return document(body, "x - y (isometric)", "z", "3-d trajectory");
}

// Pose glyphs use unit link length, matching the default body geometry.
const LINK_LENGTH = 1.0;
const POSE_COUNT = 12;

/** Hinge path in the plane with body poses drawn at regular intervals. */
export function renderSwimmerPath(tables: TrajectoryTable[]): string {
  const parsed = tables.map((t) => ({
    phi1: column(t, "phi1"),
    phi2: column(t, "phi2"),
    xs: column(t, "x"),
    ys: column(t, "y"),
  }));

  const allPoints: Array<[number, number]> = [];
  for (const { phi1, phi2, xs, ys } of parsed) {
    allPoints.push(...zip(xs, ys));
    for (let i = 0; i < xs.length; i += Math.max(1, Math.floor(xs.length / POSE_COUNT))) {
      allPoints.push([xs[i] + LINK_LENGTH * Math.cos(phi1[i]), ys[i] + LINK_LENGTH * Math.sin(phi1[i])]);
      allPoints.push([xs[i] + LINK_LENGTH * Math.cos(phi2[i]), ys[i] + LINK_LENGTH * Math.sin(phi2[i])]);
    }
  }
  const mapper = new Mapper(boundsOf(allPoints), true);

  const body: string[] = [];
  parsed.forEach(({ phi1, phi2, xs, ys }, k) => {
    const color = PALETTE[k % PALETTE.length];
    const stride = Math.max(1, Math.floor(xs.length / POSE_COUNT));
    for (let i = 0; i < xs.length; i += stride) {
      const hinge: [number, number] = [xs[i], ys[i]];
      const tip1: [number, number] = [
        xs[i] + LINK_LENGTH * Math.cos(phi1[i]),
        ys[i] + LINK_LENGTH * Math.sin(phi1[i]),
      ];
      const tip2: [number, number] = [
        xs[i] + LINK_LENGTH * Math.cos(phi2[i]),
        ys[i] + LINK_LENGTH * Math.sin(phi2[i]),
      ];
      body.push(segment(mapper, hinge, tip1, "#bbbbbb"));
      body.push(segment(mapper, hinge, tip2, "#888888"));
    }
    body.push(polyline(mapper, zip(xs, ys), color, 1.6));
    body.push(marker(mapper, [xs[0], ys[0]], color));
  });
  return document(body, "x", "y", "swimmer hinge path and poses");
}

export function render(kind: PlotKind, tables: TrajectoryTable[]): string {
  if (tables.length === 0) {
    throw new Error("at least one input CSV is required");
  }
  switch (kind) {
    case "phase_portrait":
      return renderPhasePortrait(tables);
    case "trajectory_3d":
      return renderTrajectory3d(tables);
    case "swimmer_path":
      return renderSwimmerPath(tables);
  }
}
