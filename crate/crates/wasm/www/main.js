import init, { reflectionSpectrum, separationFromDip, readShift } from "./pkg/wqed_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const fmt = (x) => Number(x).toPrecision(6);

function show(id, text, failed = false) {
  $(id).textContent = text;
  $(id).className = failed ? "result error" : "result";
}

function drawSpectrum(view) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  const x = view.detuning(), r = view.reflectivity(), t = view.transmissivity();
  const x0 = x[0], x1 = x[x.length - 1];
  const px = (v) => pad + ((v - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (v) => h - pad - v * (h - 2 * pad);

  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(fmt(x0), pad, h - 10);
  ctx.fillText(fmt(x1), w - pad - 40, h - 10);
  ctx.fillText("1", 10, pad + 4);
  ctx.fillText("0", 10, h - pad);

  for (const [ys, color] of [[t, "#8ab"], [r, "#c33"]]) {
    ctx.strokeStyle = color;
    ctx.beginPath();
    ys.forEach((v, i) => (i ? ctx.lineTo(px(x[i]), py(v)) : ctx.moveTo(px(x[i]), py(v))));
    ctx.stroke();
  }
  ctx.fillStyle = "#c33";
  ctx.fillText("R", w - pad - 30, pad + 16);
  ctx.fillStyle = "#8ab";
  ctx.fillText("T", w - pad - 15, pad + 16);
}

function updateSpectrum() {
  for (const o of document.querySelectorAll("output")) o.value = $(o.htmlFor).value;
  const span = num("span");
  try {
    const view = reflectionSpectrum(num("count"), num("separation"), num("gamma_wg"), num("gamma_free"), -span, span, 2001);
    drawSpectrum(view);
    const peaks = Array.from(view.peaks(), fmt).join(", ") || "none";
    const dips = Array.from(view.dips(), fmt).join(", ") || "none";
    show("features", `peaks: ${peaks}   dips: ${dips}`);
    view.free();
  } catch (e) {
    show("features", e.message ?? String(e), true);
  }
}

function updateDip() {
  try {
    const d = separationFromDip(num("dip"), num("dip_gamma"), num("branch"));
    show("dip_result", `spacing = ${fmt(d)} wavelengths`);
  } catch (e) {
    show("dip_result", e.message ?? String(e), true);
  }
}

function updateSensing() {
  try {
    const r = readShift(num("baseline"), num("sense_gwg"), num("sense_gfree"), $("line").value === "super", num("shift"));
    show(
      "sense_result",
      `δd = ${fmt(r.dd)}   strain = ${fmt(r.microstrain)} µε   temperature = ${fmt(r.kelvin)} K   ` +
        `${r.resolvable ? "resolvable" : "below resolution"} (limit |δd| ≥ ${fmt(r.limit)})`,
    );
    r.free();
  } catch (e) {
    show("sense_result", e.message ?? String(e), true);
  }
}

await init();
for (const el of document.querySelectorAll("fieldset:nth-of-type(1) input")) el.addEventListener("input", updateSpectrum);
for (const id of ["dip", "dip_gamma", "branch"]) $(id).addEventListener("input", updateDip);
for (const id of ["baseline", "sense_gwg", "sense_gfree", "line", "shift"]) $(id).addEventListener("input", updateSensing);
updateSpectrum();
updateDip();
updateSensing();
