// Build the package first: wasm-pack build --target web --out-dir www/pkg
import init, { classify, margulis_table, wall_mesh, wall_labels } from "./pkg/posaffine_demo.js";

const $ = (id) => document.getElementById(id);

function guard(target, f) {
  try {
    target.classList.remove("error");
    f();
  } catch (e) {
    target.classList.add("error");
    target.textContent = String(e);
  }
}

function runClassify() {
  const out = $("cls-out");
  guard(out, () => {
    const r = JSON.parse(classify(Number($("cls-n").value), $("cls-v").value));
    out.textContent =
      `region: ${r.region}\nsign changes: upper ${r.upper}, lower ${r.lower} (bound ${r.bound})`;
  });
}

function runScan() {
  const summary = $("mg-summary");
  const body = $("mg-table").querySelector("tbody");
  body.replaceChildren();
  guard(summary, () => {
    const r = JSON.parse(margulis_table(
      Number($("mg-n").value), Number($("mg-a").value), Number($("mg-b").value), Number($("mg-len").value)));
    summary.textContent = `${r.verdict}: smallest alpha/t = ${r.min_ratio.toPrecision(6)} at ${r.min_ratio_word}`;
    for (const rec of r.records) {
      const tr = document.createElement("tr");
      for (const x of [rec.word, rec.length, rec.t.toPrecision(6), rec.alpha.toPrecision(6), rec.ratio.toPrecision(6)]) {
        const td = document.createElement("td");
        td.textContent = x;
        tr.append(td);
      }
      body.append(tr);
    }
  });
}

function parseObj(text) {
  const v = [], f = [];
  for (const line of text.split("\n")) {
    const p = line.trim().split(/\s+/);
    if (p[0] === "v") v.push(p.slice(1).map(Number));
    if (p[0] === "f") f.push(p.slice(1).map((k) => Number(k) - 1));
  }
  return { v, f };
}

let mesh = null;
let angle = 0;

function draw() {
  const c = $("mesh-canvas");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  if (!mesh) return;
  const cos = Math.cos(angle), sin = Math.sin(angle);
  const proj = mesh.v.map(([x, y, z]) => [x * cos - y * sin, z, x * sin + y * cos]);
  const span = Math.max(...proj.flatMap(([x, y]) => [Math.abs(x), Math.abs(y)]), 1e-9);
  const k = 0.45 * Math.min(c.width, c.height) / span;
  const pt = ([x, y]) => [c.width / 2 + k * x, c.height / 2 - k * y];
  const faces = mesh.f
    .map((f) => ({ f, depth: f.reduce((s, i) => s + proj[i][2], 0) }))
    .sort((a, b) => a.depth - b.depth);
  for (const { f, depth } of faces) {
    g.beginPath();
    f.forEach((i, j) => (j ? g.lineTo(...pt(proj[i])) : g.moveTo(...pt(proj[i]))));
    g.closePath();
    g.fillStyle = `hsla(${200 + 10 * depth}, 60%, 55%, 0.55)`;
    g.fill();
    g.stroke();
  }
}

function runMesh() {
  const link = $("mesh-save");
  guard(link, () => {
    const obj = wall_mesh(Number($("mesh-wall").value), 1, 1, Number($("mesh-bound").value));
    mesh = parseObj(obj);
    link.textContent = "save OBJ";
    link.href = URL.createObjectURL(new Blob([obj], { type: "text/plain" }));
    draw();
  });
}

await init();
JSON.parse(wall_labels()).forEach((label, i) => {
  const o = document.createElement("option");
  o.value = i;
  o.textContent = label;
  $("mesh-wall").append(o);
});
$("cls-go").onclick = runClassify;
$("mg-go").onclick = runScan;
$("mesh-go").onclick = runMesh;
$("mesh-canvas").onmousemove = (e) => {
  angle = (e.offsetX / e.target.width) * 2 * Math.PI;
  draw();
};
runClassify();
runMesh();
