import init, { lgMagnitudes, evolvedMagnitudes, flowPaths, stationaryPoints } from "./pkg/sclg_web.js";

const RAMP = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
const FLOW_H = 0.1;
const WINDOW = 1.5;

const $ = (id) => document.getElementById(id);

function color(v) {
  const s = Math.min(Math.max(v, 0), 1) * (RAMP.length - 1);
  const k = Math.min(Math.floor(s), RAMP.length - 2);
  const f = s - k;
  return RAMP[k].map((c, i) => Math.round(c + f * (RAMP[k + 1][i] - c)));
}

// values are x-major on a count x count grid; y increases upwards.
function drawHeatMap(canvas, values, count) {
  const max = values.reduce((a, b) => Math.max(a, b), 0) || 1;
  const img = new ImageData(count, count);
  for (let i = 0; i < count; i++) {
    for (let j = 0; j < count; j++) {
      const p = 4 * ((count - 1 - j) * count + i);
      const [r, g, b] = color(values[i * count + j] / max);
      img.data.set([r, g, b, 255], p);
    }
  }
  const off = new OffscreenCanvas(count, count);
  off.getContext("2d").putImageData(img, 0, 0);
  const ctx = canvas.getContext("2d");
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
}

function guarded(statusId, f) {
  return () => {
    try {
      f();
      $(statusId).textContent = "";
    } catch (e) {
      $(statusId).textContent = e.message ?? String(e);
    }
  };
}

const drawMode = guarded("mode-status", () => {
  const h = Number($("mode-h").value);
  $("mode-h-val").textContent = h.toFixed(2);
  const count = 128;
  const extent = 4 * Math.sqrt(h);
  drawHeatMap($("mode-canvas"), lgMagnitudes(Number($("mode-j").value), Number($("mode-k").value), h, extent, count), count);
});

const drawEvolved = guarded("evolve-status", () => {
  const T = Number($("evolve-t").value);
  $("evolve-t-val").textContent = `${(T / Math.PI * 8).toFixed(2)}π/8`;
  const count = 128;
  const values = evolvedMagnitudes(Number($("evolve-m").value), Number($("evolve-n").value), T * Math.SQRT2, 1, 4, count, 64);
  drawHeatMap($("evolve-canvas"), values, count);
});

function defaultSeeds() {
  const seeds = [];
  for (let a = 0; a < 9; a++) {
    for (let b = 0; b < 9; b++) {
      seeds.push(-1 + a / 4, -1 + b / 4);
    }
  }
  return seeds;
}

let seeds = defaultSeeds();

const drawFlow = guarded("flow-status", () => {
  const r2 = Number($("flow-r2").value);
  $("flow-r2-val").textContent = r2.toFixed(1);
  const canvas = $("flow-canvas");
  const ctx = canvas.getContext("2d");
  const size = canvas.width;
  const px = (x, xi) => [(x + WINDOW) / (2 * WINDOW) * size, (WINDOW - xi) / (2 * WINDOW) * size];
  ctx.fillStyle = "white";
  ctx.fillRect(0, 0, size, size);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(0, size / 2); ctx.lineTo(size, size / 2);
  ctx.moveTo(size / 2, 0); ctx.lineTo(size / 2, size);
  ctx.stroke();

  const path = flowPaths(new Float64Array(seeds), FLOW_H, r2, 20, WINDOW);
  ctx.strokeStyle = "#1f4e9c";
  ctx.beginPath();
  let pen = false;
  for (let k = 0; k < path.length; k += 2) {
    if (Number.isNaN(path[k])) {
      pen = false;
      continue;
    }
    const [u, v] = px(path[k], path[k + 1]);
    if (pen) ctx.lineTo(u, v); else ctx.moveTo(u, v);
    pen = true;
  }
  ctx.stroke();

  const st = stationaryPoints(FLOW_H, r2);
  for (let k = 0; k < st.length; k += 2) {
    const [u, v] = px(st[k], st[k + 1]);
    ctx.beginPath();
    ctx.arc(u, v, 5, 0, 2 * Math.PI);
    ctx.fillStyle = k < 4 ? "black" : "white";
    ctx.fill();
    ctx.strokeStyle = "black";
    ctx.stroke();
  }
});

await init();

for (const id of ["mode-j", "mode-k", "mode-h"]) $(id).addEventListener("input", drawMode);
for (const id of ["evolve-m", "evolve-n", "evolve-t"]) $(id).addEventListener("input", drawEvolved);
$("flow-r2").addEventListener("input", drawFlow);
$("flow-clear").addEventListener("click", () => {
  seeds = defaultSeeds();
  drawFlow();
});
$("flow-canvas").addEventListener("click", (ev) => {
  const rect = ev.target.getBoundingClientRect();
  const x = (ev.clientX - rect.left) / rect.width * 2 * WINDOW - WINDOW;
  const xi = WINDOW - (ev.clientY - rect.top) / rect.height * 2 * WINDOW;
  seeds.push(x, xi);
  drawFlow();
});

drawMode();
drawEvolved();
drawFlow();
