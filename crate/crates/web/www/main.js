import init, { fixtures, dimX, trajectory, deviationGrid, phi } from "./pkg/mapcyl_web.js";

const $ = (id) => document.getElementById(id);
const GRID = 73;

function coords() {
  return Float64Array.from($("coords").value.split(",").map(Number));
}

function drawTrajectory() {
  const cv = $("traj"), g = cv.getContext("2d");
  const t = Number($("traj-t").value);
  $("traj-t-val").textContent = t.toFixed(2);
  g.clearRect(0, 0, cv.width, cv.height);
  $("traj-err").textContent = "";
  let pts;
  try {
    const tArg = $("traj-base").checked ? undefined : t;
    pts = JSON.parse(trajectory($("fixture").value, $("traj-impl").value, coords(), tArg, 181));
  } catch (e) {
    $("traj-err").textContent = String(e);
    return;
  }
  const pad = 20, w = cv.width - 2 * pad, h = cv.height - 2 * pad;
  g.strokeStyle = "#ccc";
  g.strokeRect(pad, pad, w, h);
  for (const k of [1, 2]) {
    const x = pad + (k * w) / 3;
    g.beginPath(); g.moveTo(x, pad); g.lineTo(x, pad + h); g.stroke();
  }
  g.strokeStyle = "#1f5fa8";
  g.lineWidth = 2;
  g.beginPath();
  pts.forEach((p, i) => {
    const y = p.point.kind === "base" ? 0 : p.point.t;
    const X = pad + p.s * w, Y = pad + (1 - y) * h;
    i === 0 ? g.moveTo(X, Y) : g.lineTo(X, Y);
  });
  g.stroke();
  g.lineWidth = 1;
}

function drawDeviation() {
  const cv = $("dev"), g = cv.getContext("2d");
  $("dev-err").textContent = "";
  let d;
  try {
    d = deviationGrid($("fixture").value, "compositional", $("dev-impl").value, GRID, coords());
  } catch (e) {
    $("dev-err").textContent = String(e);
    g.clearRect(0, 0, cv.width, cv.height);
    return;
  }
  const max = d.reduce((m, v) => Math.max(m, v), 0);
  $("dev-max").textContent = `max ${max.toExponential(3)}`;
  const cell = cv.width / GRID;
  for (let i = 0; i < GRID; i++) {
    for (let j = 0; j < GRID; j++) {
      const v = Math.min(1, d[i * GRID + j]);
      const shade = Math.round(255 * (1 - v));
      g.fillStyle = `rgb(255, ${shade}, ${shade})`;
      g.fillRect(j * cell, (GRID - 1 - i) * cell, cell + 1, cell + 1);
    }
  }
}

function drawPhi(u, v) {
  const cv = $("phi"), g = cv.getContext("2d"), n = cv.width;
  g.clearRect(0, 0, n, n);
  g.strokeStyle = "#999";
  g.strokeRect(0.5, 0.5, n - 1, n - 1);
  // the dividing line v = 2 - 2u between the two branches
  g.setLineDash([4, 4]);
  g.beginPath(); g.moveTo(n / 2, 0); g.lineTo(n, n); g.stroke();
  g.setLineDash([]);
  if (u === undefined) return;
  const [a, b] = phi(u, v);
  const P = (x, y) => [x * n, (1 - y) * n];
  const [x0, y0] = P(u, v), [x1, y1] = P(a, b);
  g.strokeStyle = "#a83a1f";
  g.beginPath(); g.moveTo(x0, y0); g.lineTo(x1, y1); g.stroke();
  g.fillStyle = "#a83a1f";
  g.beginPath(); g.arc(x1, y1, 4, 0, 2 * Math.PI); g.fill();
  $("phi-val").textContent = `φ(${u.toFixed(3)}, ${v.toFixed(3)}) = (${a.toFixed(3)}, ${b.toFixed(3)})`;
}

function refresh() {
  try {
    $("dim").textContent = `dim X = ${dimX($("fixture").value)}`;
  } catch (e) {
    $("dim").textContent = "";
  }
  drawTrajectory();
  drawDeviation();
}

await init();
for (const name of JSON.parse(fixtures())) {
  const o = document.createElement("option");
  o.textContent = name;
  $("fixture").append(o);
}
$("fixture").addEventListener("change", () => {
  const d = dimX($("fixture").value);
  $("coords").value = d === 2 ? "1.2, 0.5" : "1";
  refresh();
});
for (const id of ["coords", "traj-impl", "traj-t", "traj-base"]) $(id).addEventListener("input", drawTrajectory);
for (const id of ["coords", "dev-impl"]) $(id).addEventListener("input", drawDeviation);
$("phi").addEventListener("mousemove", (ev) => {
  const r = ev.target.getBoundingClientRect();
  drawPhi((ev.clientX - r.left) / r.width, 1 - (ev.clientY - r.top) / r.height);
});
drawPhi();
refresh();
