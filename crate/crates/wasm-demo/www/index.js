import init, { recognize, resolveTimex, nextOccurrences } from "./pkg/ntx_wasm.js";

const $ = (id) => document.getElementById(id);

const COLORS = { numex: "#ffe08a", timex: "#9fd8ff" };
const NUMEX = new Set(["cardinal", "ordinal", "percentage", "numberrange", "currency", "dimension", "temperature", "age"]);

function show(out, f) {
  out.classList.remove("err");
  try {
    const v = f();
    out.textContent = JSON.stringify(JSON.parse(v), null, 2);
    return JSON.parse(v);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
    return null;
  }
}

// Offsets are in Unicode scalar values, so index by code point.
function highlight(text, mentions) {
  const chars = Array.from(text);
  const p = $("marked");
  p.textContent = "";
  let at = 0;
  for (const m of mentions) {
    p.append(chars.slice(at, m.start).join(""));
    const mark = document.createElement("mark");
    mark.style.background = NUMEX.has(m.type) ? COLORS.numex : COLORS.timex;
    mark.title = `${m.type}: ${m.value}`;
    mark.textContent = chars.slice(m.start, m.start + m.length).join("");
    p.append(mark);
    at = m.start + m.length;
  }
  p.append(chars.slice(at).join(""));
}

await init();

$("run-recognize").onclick = () => {
  const text = $("text").value;
  const v = show($("out-recognize"), () => recognize($("lang").value, text, $("anchor").value));
  highlight(text, v ? v.mentions : []);
};
$("run-resolve").onclick = () => show($("out-resolve"), () => resolveTimex($("timex").value, $("anchor").value));
$("run-set").onclick = () =>
  show($("out-set"), () => nextOccurrences($("set").value, $("anchor").value, Number($("count").value) || 1));

$("anchor").onchange = () => ["run-recognize", "run-resolve", "run-set"].forEach((id) => $(id).click());
$("anchor").onchange();
