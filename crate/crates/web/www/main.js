import init, { simulate, solveInstance, cliqueRules } from "./pkg/snapshot_lab_web.js";

const mono = (order) => ({ monotone: true, order });
const free = (order) => ({ monotone: false, order });
const labels = (n) => Array.from({ length: n }, (_, i) => `u${i + 1}`);
const complete = (n) => labels(n).flatMap((_, u) => labels(n).slice(u + 1).map((_, j) => [u, u + 1 + j]));

const presets = {
  "star, monotone simultaneous": {
    seed: "u1,u3",
    instance: {
      labels: labels(4), edges: [[0, 1], [1, 2], [1, 3]], thresholds: [1, 2, 1, 1],
      snapshot: [0, 1, 2], budget: 2, dynamics: mono("simultaneous"),
    },
  },
  "deactivating cascade, simultaneous": {
    seed: "u1",
    instance: {
      labels: labels(7),
      edges: [[0, 1], [0, 2], [0, 4], [0, 5], [1, 3], [2, 3], [4, 6], [5, 6]],
      thresholds: [5, 1, 1, 2, 1, 1, 2], snapshot: [3, 6], budget: 1, dynamics: free("simultaneous"),
    },
  },
  "ten-node clique": {
    seed: "u4,u5",
    instance: {
      labels: labels(10), edges: complete(10), thresholds: [1, 1, 2, 2, 3, 4, 5, 6, 7, 8],
      snapshot: [0, 1, 2, 3, 4, 5, 6], budget: 2, dynamics: mono("simultaneous"),
    },
  },
  "eleven nodes, sequential": {
    seed: "u1",
    ordering: "u3,u4,u9",
    instance: {
      labels: labels(11),
      edges: [0, 1].flatMap((h) => [2, 3, 4, 5, 6, 7].map((v) => [h, v]))
        .concat([[2, 8], [3, 8], [4, 9], [5, 9], [6, 10], [7, 10]]),
      thresholds: [7, 7, 2, 2, 2, 2, 2, 2, 2, 2, 2], snapshot: [8, 9, 10], budget: 2, dynamics: free("sequential"),
    },
  },
};

const $ = (id) => document.getElementById(id);
const canvas = $("view");
const ctx = canvas.getContext("2d");
let current = null;

function layout(n) {
  const r = Math.min(canvas.width, canvas.height) / 2 - 40;
  return Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / n - Math.PI / 2;
    return [canvas.width / 2 + r * Math.cos(a), canvas.height / 2 + r * Math.sin(a)];
  });
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!current) return;
  const { labels, edges, thresholds, snapshot } = current;
  const pos = layout(labels.length);
  const frames = current.run ? current.run.frames : [];
  const frame = frames[Number($("frame").value)] ?? { active: [], time: 0, selected: null };
  const active = new Set(frame.active);
  const target = new Set(snapshot);
  const seed = new Set((current.seed ?? []).map((l) => labels.indexOf(l)));
  ctx.strokeStyle = "#999";
  ctx.lineWidth = 1;
  for (const [u, v] of edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  labels.forEach((label, v) => {
    const [x, y] = pos[v];
    ctx.beginPath();
    ctx.arc(x, y, 16, 0, 2 * Math.PI);
    ctx.fillStyle = active.has(v) ? (seed.has(v) ? "#f08c00" : "#1c7ed6") : "#fff";
    ctx.fill();
    ctx.lineWidth = target.has(v) ? 4 : 1.5;
    ctx.strokeStyle = label === frame.selected ? "#d6336c" : "#333";
    ctx.stroke();
    ctx.fillStyle = active.has(v) ? "#fff" : "#222";
    ctx.font = "12px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(label, x, y);
    ctx.fillStyle = "#555";
    ctx.fillText(String(thresholds[v]), x + 22, y - 18);
  });
  const matched = current.run && current.run.match_time === frame.time ? " (matches snapshot)" : "";
  $("time").textContent = `t = ${frame.time}${matched}`;
}

function show(report, status) {
  current = report;
  const frames = report.run ? report.run.frames.length : 1;
  $("frame").max = String(frames - 1);
  $("frame").value = String(report.run?.match_time ?? frames - 1);
  $("status").className = "";
  $("status").textContent = status;
  $("report").textContent = JSON.stringify(report, null, 2);
  draw();
}

function run(op) {
  try {
    op();
  } catch (err) {
    $("status").className = "error";
    $("status").textContent = String(err.message ?? err);
  }
}

function loadPreset(name) {
  const p = presets[name];
  $("instance").value = JSON.stringify(p.instance, null, 1);
  $("seed").value = p.seed;
  $("ordering").value = p.ordering ?? "";
  run(() => show(JSON.parse(simulate($("instance").value, p.seed, p.ordering ?? "")), "loaded"));
}

await init();
for (const name of Object.keys(presets)) {
  $("preset").append(new Option(name, name));
}
$("preset").addEventListener("change", (e) => loadPreset(e.target.value));
$("frame").addEventListener("input", draw);
$("simulate").addEventListener("click", () => run(() => {
  const r = JSON.parse(simulate($("instance").value, $("seed").value, $("ordering").value));
  show(r, `${r.run.termination}; match time ${r.run.match_time ?? "none"}`);
}));
$("solve").addEventListener("click", () => run(() => {
  const r = JSON.parse(solveInstance($("instance").value));
  show(r, `${r.verdict}${r.seed ? `, seed {${r.seed.join(", ")}}` : ""}; ${r.seeds_tried} seeds tried`);
}));
$("clique").addEventListener("click", () => run(() => {
  const r = JSON.parse(cliqueRules($("instance").value));
  const fired = r.rules.filter((x) => x.action !== "inapplicable").map((x) => x.rule);
  show({ ...r, run: undefined }, `${r.verdict}; rules fired: ${fired.join(", ") || "none"}`);
}));
loadPreset(Object.keys(presets)[0]);
