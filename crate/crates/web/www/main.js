// Built with: wasm-pack build crates/web --target web --out-dir www/pkg
import init, { dilation_curves, index_statistic, nabla3_table } from "./pkg/orlicz_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"];

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
}

// Plot series of [x, y] points; `fx`, `fy` map data to [0, 1].
function plot(canvas, series, fx, fy, labels) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  axes(ctx, w, h, pad);
  series.forEach((pts, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    pts.forEach(([x, y], i) => {
      const px = pad + fx(x) * (w - 2 * pad);
      const py = h - pad - fy(y) * (h - 2 * pad);
      i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
    if (labels) {
      ctx.fillStyle = ctx.strokeStyle;
      ctx.fillText(labels[k], w - pad - 40, pad + 14 * k);
    }
  });
}

function scale(lo, hi) {
  const span = hi - lo || 1;
  return (v) => (v - lo) / span;
}

function fail(el, e) {
  el.textContent = String(e);
  el.className = "error";
}

function drawDilations() {
  const info = $("dil-info");
  info.className = "";
  try {
    const data = JSON.parse(dilation_curves(+$("dil-lo").value, +$("dil-hi").value));
    const log = $("dil-log").checked;
    const tx = log ? Math.log2 : (v) => v;
    const ty = log ? (v) => Math.log2(Math.max(v, 1e-300)) : (v) => v;
    const xs = data.x.map(tx);
    const series = data.curves.map((c) => c.values.map((b, i) => [xs[i], ty(b[1])]));
    const ys = series.flat().map((p) => p[1]).filter(Number.isFinite);
    plot($("dil-canvas"), series,
         scale(Math.min(...xs), Math.max(...xs)),
         scale(Math.min(...ys), Math.max(...ys)),
         data.curves.map((c) => "n=" + c.n));
    const gaps = data.cauchy_gaps.map((g) => g[1].toExponential(2)).join(", ");
    info.textContent = "sup-distance between consecutive curves: " + (gaps || "–");
  } catch (e) {
    fail(info, e);
  }
}

function drawIndex() {
  const info = $("idx-info");
  info.className = "";
  try {
    const d = JSON.parse(index_statistic($("idx-model").value, $("idx-p").value, +$("idx-k").value));
    const xs = d.range_log2.map(Math.log2);
    const lo = d.sup_log2.map((b, i) => [xs[i], b[0]]);
    const hi = d.sup_log2.map((b, i) => [xs[i], b[1]]);
    const ys = d.sup_log2.flat();
    plot($("idx-canvas"), [lo, hi],
         scale(Math.min(...xs), Math.max(...xs)),
         scale(Math.min(0, ...ys), Math.max(...ys)));
    info.innerHTML = `${d.model}: running sup (log₂) against log₂ e; verdict ` +
      `<span class="verdict">${d.verdict}</span>`;
  } catch (e) {
    fail(info, e);
  }
}

function drawNabla() {
  const info = $("nab-info");
  const table = $("nab-table");
  info.className = "";
  table.innerHTML = "";
  try {
    const d = JSON.parse(nabla3_table($("nab-model").value, $("nab-c").value));
    info.innerHTML = `${d.model}: <span class="verdict">${d.verdict}</span> (heuristic). ${d.note}`;
    const head = "<tr><th>t</th><th>M̃(t)</th><th>M̃(Ct)</th><th>log₂ ratio</th></tr>";
    const fmt = (b) => b[0].toPrecision(8);
    table.innerHTML = head + d.rows.map((r) =>
      `<tr><td>${r.t.toPrecision(6)}</td><td>${fmt(r.conj_t)}</td>` +
      `<td>${fmt(r.conj_ct)}</td><td>${fmt(r.log2_ratio)}</td></tr>`).join("");
  } catch (e) {
    fail(info, e);
  }
}

await init();
$("status").textContent = "Ready.";
$("dil-go").onclick = drawDilations;
$("idx-go").onclick = drawIndex;
$("nab-go").onclick = drawNabla;
drawDilations();
