import init, { sweepSvg, visibility, recordDemo } from "./pkg/phasebell_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(el, f, asHtml) {
  try {
    const out = f();
    el.classList.remove("err");
    if (asHtml) el.innerHTML = out; else el.textContent = out;
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
  }
}

function pretty(json) {
  return JSON.stringify(JSON.parse(json), null, 2);
}

await init();

$("sw-run").onclick = () =>
  show($("sw-out"), () =>
    sweepSvg(num("sw-max"), num("sw-steps"), num("sw-n"), num("sw-seed"), $("sw-conv").value, num("sw-kappa")), true);

const updateVisibility = () =>
  show($("v-out"), () => pretty(visibility(num("v-kappa"), num("v-gamma"))));
$("v-kappa").oninput = updateVisibility;
$("v-gamma").oninput = updateVisibility;

$("r-run").onclick = () =>
  show($("r-out"), () => pretty(recordDemo(num("r-sigma"), num("r-windows"), num("r-seed"), $("r-conv").value)));

updateVisibility();
$("sw-run").click();
