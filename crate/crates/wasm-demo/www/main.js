import init, { responseCurve, solvePlate } from "./pkg/strainlimit_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);
const status = (text) => { $("status").textContent = text; };

function syncOutputs() {
  for (const input of document.querySelectorAll("input[type=range]")) {
    input.nextElementSibling.value = input.value;
  }
}

function axes(ctx, w, h, pad, xmax, ymax, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.fillText(xlabel, w - pad - 40, h - pad + 24);
  ctx.fillText(`${xmax.toPrecision(3)}`, w - pad - 10, h - pad + 12);
  ctx.fillText(ylabel, 4, pad / 2 + 4);
  ctx.fillText(`${ymax.toPrecision(3)}`, 4, pad / 2 + 18);
  return {
    x: (v) => pad + (v / xmax) * (w - 1.5 * pad),
    y: (v) => h - pad - (v / ymax) * (h - 1.5 * pad),
  };
}

function polyline(ctx, map, xs, ys, style, dash = []) {
  ctx.strokeStyle = style;
  ctx.setLineDash(dash);
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(map.x(x), map.y(ys[i])) : ctx.moveTo(map.x(x), map.y(ys[i]))));
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawCurve() {
  const a = num("a"), b = num("b"), angle = (num("angle") * Math.PI) / 180;
  const smax = b > 0 ? 20 / b : 20;
  const along = responseCurve(a, b, angle, true, smax, 200);
  const across = responseCurve(a, b, angle, false, smax, 200);
  const ctx = $("curve").getContext("2d");
  const ymax = b > 0 ? 1.2 / b : Math.max(...along.linearStrain, ...across.linearStrain);
  const map = axes(ctx, 360, 300, 40, smax, ymax, "|stress|", "strain");
  polyline(ctx, map, along.stress, along.linearStrain.map((v) => Math.min(v, ymax)), "#bbb");
  polyline(ctx, map, along.stress, along.strain, "#1f5fa8");
  polyline(ctx, map, across.stress, across.strain, "#c0392b", [5, 4]);
  if (Number.isFinite(along.ceiling)) {
    ctx.strokeStyle = "#999";
    ctx.setLineDash([2, 3]);
    ctx.beginPath();
    ctx.moveTo(map.x(0), map.y(along.ceiling));
    ctx.lineTo(map.x(smax), map.y(along.ceiling));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillText("1/b", map.x(smax) - 20, map.y(along.ceiling) - 4);
  }
}

function color(t) {
  // Blue to red through white.
  const c = Math.max(0, Math.min(1, t));
  const r = c < 0.5 ? 2 * c : 1;
  const b = c < 0.5 ? 1 : 2 * (1 - c);
  const g = 1 - Math.abs(2 * c - 1);
  return `rgb(${Math.round(255 * r)},${Math.round(255 * (0.35 + 0.65 * g))},${Math.round(255 * b)})`;
}

function drawPlate(plate, field) {
  const nodes = plate.nodes, els = plate.elements, u = plate.displacement;
  const values = plate[field];
  const lo = Math.min(...values), hi = Math.max(...values);
  const umax = Math.max(1e-12, ...u.map(Math.abs));
  const scale = 0.08 / umax;
  const ctx = $("plate").getContext("2d");
  const size = 360, pad = 20, w = size - 2 * pad;
  ctx.clearRect(0, 0, size, size);
  const px = (n) => pad + (nodes[2 * n] + scale * u[2 * n]) * w;
  const py = (n) => size - pad - (nodes[2 * n + 1] + scale * u[2 * n + 1]) * w;
  for (let e = 0; e < els.length / 4; e++) {
    const v = els.slice(4 * e, 4 * e + 4);
    const avg = v.reduce((s, n) => s + values[n], 0) / 4;
    ctx.fillStyle = color(hi > lo ? (avg - lo) / (hi - lo) : 0.5);
    ctx.beginPath();
    v.forEach((n, i) => (i ? ctx.lineTo(px(n), py(n)) : ctx.moveTo(px(n), py(n))));
    ctx.closePath();
    ctx.fill();
  }
  if (plate.tipNode < nodes.length / 2) {
    ctx.fillStyle = "#000";
    ctx.beginPath();
    ctx.arc(px(plate.tipNode), py(plate.tipNode), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
  return [lo, hi];
}

function drawOpening(plate) {
  const xs = Array.from(plate.openingX), js = Array.from(plate.openingJump);
  const ctx = $("opening").getContext("2d");
  const map = axes(ctx, 360, 300, 40, 1, Math.max(1e-12, ...js) * 1.1, "x", "jump");
  polyline(ctx, map, xs, js, "#1f5fa8");
  ctx.fillStyle = "#1f5fa8";
  xs.forEach((x, i) => ctx.fillRect(map.x(x) - 2, map.y(js[i]) - 2, 4, 4));
}

let plate = null;

function solve() {
  const t0 = performance.now();
  try {
    plate = solvePlate(
      num("cells"), num("order"), num("a"), num("b"), (num("angle") * Math.PI) / 180,
      $("load").value === "para", num("d"),
    );
  } catch (err) {
    status(`solve failed: ${err.message ?? err}`);
    return;
  }
  redraw(performance.now() - t0);
}

function redraw(ms) {
  if (!plate) return;
  const [lo, hi] = drawPlate(plate, $("field").value);
  drawOpening(plate);
  status(
    `Picard: ${plate.iterations} iterations, converged ${plate.converged}, clamp events ${plate.clampEvents}` +
      (ms === undefined ? "" : `, ${ms.toFixed(0)} ms`) +
      `\n${$("field").selectedOptions[0].text} range [${lo.toPrecision(4)}, ${hi.toPrecision(4)}]`,
  );
}

await init();
syncOutputs();
drawCurve();
for (const id of ["a", "b", "angle"]) $(id).addEventListener("input", () => { syncOutputs(); drawCurve(); });
for (const id of ["cells", "d"]) $(id).addEventListener("input", syncOutputs);
$("field").addEventListener("change", () => redraw());
$("solve").addEventListener("click", solve);
solve();
