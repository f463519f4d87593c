import init, { ot_demo, mcf_demo, perturb_demo } from "./pkg/xover_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (v) => (typeof v === "number" ? Number(v.toPrecision(8)) : v);

function fail(out, e) {
  out.classList.add("err");
  out.textContent = String(e.message ?? e);
}

function clear(ctx) {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
}

let lastOt = null;

function drawOt() {
  const ctx = $("ot-canvas").getContext("2d");
  clear(ctx);
  if (!lastOt) return;
  const W = ctx.canvas.width, pad = 20, s = W - 2 * pad;
  const at = ([x, y]) => [pad + x * s, pad + (1 - y) * s];
  const plan = $("ot-show").checked ? lastOt.sinkhorn.plan : lastOt.vertex.plan;
  const maxMass = Math.max(...plan.map((e) => e[2]));
  for (const [i, j, mass] of plan) {
    const [x0, y0] = at(lastOt.sources[i]);
    const [x1, y1] = at(lastOt.targets[j]);
    ctx.strokeStyle = `rgba(40, 40, 40, ${0.15 + 0.85 * mass / maxMass})`;
    ctx.lineWidth = 0.5 + 3 * mass / maxMass;
    ctx.beginPath(); ctx.moveTo(x0, y0); ctx.lineTo(x1, y1); ctx.stroke();
  }
  const dots = (pts, w, color) => pts.forEach((p, k) => {
    const [x, y] = at(p);
    ctx.fillStyle = color;
    ctx.beginPath(); ctx.arc(x, y, 3 + 40 * Math.sqrt(w[k] / pts.length), 0, 2 * Math.PI); ctx.fill();
  });
  dots(lastOt.sources, lastOt.supply, "#2b6cb0");
  dots(lastOt.targets, lastOt.demand, "#dd6b20");
}

function runOt() {
  const out = $("ot-out");
  out.classList.remove("err");
  try {
    const eta = $("ot-eta").value === "" ? undefined : Number($("ot-eta").value);
    lastOt = JSON.parse(ot_demo(num("ot-m"), num("ot-n"), BigInt(num("ot-seed")), eta));
    out.textContent = [
      `Sinkhorn: ${lastOt.sinkhorn.iterations} iterations, η = ${fmt(lastOt.sinkhorn.eta)}`,
      `  objective ${fmt(lastOt.sinkhorn.objective)}, ${lastOt.sinkhorn.plan.length} entries above 1e-6`,
      `Vertex: objective ${fmt(lastOt.vertex.objective)}, ${lastOt.vertex.plan.length} nonzeros`,
      `  push loops ${lastOt.vertex.push_loops}, re-optimization pivots ${lastOt.vertex.reopt_pivots}`,
      `  vertex check: ${lastOt.vertex.is_vertex}`,
      `Simplex optimum: ${fmt(lastOt.oracle_objective)}`,
      `Relative error: ${lastOt.relative_error.toExponential(2)}`,
    ].join("\n");
  } catch (e) {
    lastOt = null;
    fail(out, e);
  }
  drawOt();
}

function runMcf() {
  const out = $("mcf-out");
  out.classList.remove("err");
  const ctx = $("mcf-canvas").getContext("2d");
  clear(ctx);
  try {
    const r = JSON.parse(mcf_demo(num("mcf-nodes"), num("mcf-arcs"), BigInt(num("mcf-seed")), num("mcf-gap")));
    const W = ctx.canvas.width, c = W / 2, rad = W / 2 - 30;
    const pos = (k) => [c + rad * Math.cos((2 * Math.PI * k) / r.nodes), c + rad * Math.sin((2 * Math.PI * k) / r.nodes)];
    const maxFlow = Math.max(1, ...r.arcs.map((a) => a.flow));
    for (const a of r.arcs) {
      const [x0, y0] = pos(a.tail), [x1, y1] = pos(a.head);
      ctx.strokeStyle = a.flow > 0 ? (a.flow >= a.capacity ? "#c53030" : "#2f855a") : "#ddd";
      ctx.lineWidth = a.flow > 0 ? 1 + 4 * a.flow / maxFlow : 0.7;
      ctx.beginPath(); ctx.moveTo(x0, y0); ctx.lineTo(x1, y1); ctx.stroke();
    }
    r.supply.forEach((b, k) => {
      const [x, y] = pos(k);
      ctx.fillStyle = b > 0 ? "#2b6cb0" : b < 0 ? "#dd6b20" : "#777";
      ctx.beginPath(); ctx.arc(x, y, 6, 0, 2 * Math.PI); ctx.fill();
    });
    const basic = r.arcs.filter((a) => a.flow > 0 && a.flow < a.capacity).length;
    out.textContent = [
      `Interior point: ${r.ipm_iterations} iterations, objective ${fmt(r.approx_objective)}`,
      `Crossover: objective ${r.objective} (integral: ${r.integral})`,
      `  master iterations ${r.bi_master_iterations} + ${r.opt_master_iterations}, ${r.pivots} pivots`,
      `  ${basic} arcs strictly between bounds (green), saturated arcs red`,
      `Simplex optimum: ${r.oracle_objective}`,
    ].join("\n");
  } catch (e) {
    fail(out, e);
  }
}

function runPerturb() {
  const out = $("pt-out");
  out.classList.remove("err");
  $("pt-table").innerHTML = "";
  try {
    const r = JSON.parse(perturb_demo(num("pt-size"), num("pt-face"), BigInt(num("pt-seed")), num("pt-delta"), BigInt(num("pt-trials"))));
    out.textContent = [
      `LP: ${r.rows} rows × ${r.cols} columns, optimal face of dimension ${r.face_dim}`,
      `Optimum ${fmt(r.optimum)}; interior point gap ${r.ipm_gap.toExponential(2)}`,
      `Interior point splits each duplicated pair:`,
      ...r.interior_split.map(([a, b], k) => `  pair ${k}: ${fmt(a)} / ${fmt(b)}`),
      `Distinct vertices over ${r.runs.length} seeds: ${r.distinct_vertices}`,
    ].join("\n");
    const head = `<tr><th>seed</th><th>objective</th><th>vertex</th><th>support</th><th>bound</th><th>pair splits</th></tr>`;
    const rows = r.runs.map((x) => `<tr><td>${x.seed}</td><td>${fmt(x.objective)}</td><td>${x.is_vertex}</td>` +
      `<td>${x.support_size}${x.fallback ? " (full)" : ""}</td><td>${x.bound_holds}</td>` +
      `<td>${x.split.map(([a, b]) => `${fmt(a)}|${fmt(b)}`).join("  ")}</td></tr>`);
    $("pt-table").innerHTML = `<table>${head}${rows.join("")}</table>`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("ot-run").onclick = runOt;
$("ot-show").onchange = drawOt;
$("mcf-run").onclick = runMcf;
$("pt-run").onclick = runPerturb;
runOt();
runMcf();
runPerturb();
