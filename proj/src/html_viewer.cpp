#include "lawsmells/report.hpp"

namespace lawsmells {

namespace {

// Plain browser script: icicle explorer, finding tables, threshold preview
// and config fragment export. No network access, no dependencies.
constexpr std::string_view kViewer = R"JS(
(function () {
  "use strict";
  var data = JSON.parse(document.getElementById("report-data").textContent);
  var app = document.getElementById("app");
  var style = document.createElement("style");
  style.textContent = [
    "body{font:14px sans-serif;margin:1em;color:#222}",
    "table{border-collapse:collapse;margin:.5em 0}td,th{border:1px solid #ccc;padding:2px 6px;text-align:left}",
    ".layer{display:flex;height:28px;margin-bottom:2px}",
    ".cell{overflow:hidden;white-space:nowrap;font-size:11px;background:#9ecae1;border-right:1px solid #fff;cursor:pointer;box-sizing:border-box;padding:2px}",
    ".cell.long{background:#fc9272}.muted{color:#777}section{margin-bottom:1.5em}"
  ].join("\n");
  document.head.appendChild(style);

  function el(tag, attrs, text) {
    var e = document.createElement(tag);
    for (var k in attrs || {}) e.setAttribute(k, attrs[k]);
    if (text !== undefined) e.textContent = text;
    return e;
  }
  function table(head, rows) {
    var t = el("table"), tr = el("tr");
    head.forEach(function (h) { tr.appendChild(el("th", {}, h)); });
    t.appendChild(tr);
    rows.forEach(function (r) {
      var row = el("tr");
      r.forEach(function (c) { row.appendChild(el("td", {}, c === null ? "" : String(c))); });
      t.appendChild(row);
    });
    return t;
  }

  app.appendChild(el("h1", {}, "Law smells report"));
  app.appendChild(el("p", { "class": "muted" },
    "version " + data.tool_version + ", config " + data.fingerprint.slice(0, 16)));

  var state = { snapshot: 0, focus: null, trail: [],
                page_tokens: data.config.page_tokens,
                size_x: data.config.size_x === null ? 0 : data.config.size_x,
                chain_x: data.config.chain_x, kind: "" };

  var picker = el("select");
  data.labels.forEach(function (l, i) { picker.appendChild(el("option", { value: i }, l)); });
  picker.onchange = function () { state.snapshot = +picker.value; state.focus = null; state.trail = []; render(); };
  app.appendChild(picker);

  var body = el("div");
  app.appendChild(body);

  function snap() { return data.snapshots[state.snapshot]; }
  function docRoot() {
    var s = snap(), size = 0;
    s.icicles.forEach(function (n) { size += n.size; });
    return { id: s.label, heading: "snapshot " + s.label, size: size, children: s.icicles };
  }

  function icicle() {
    var box = el("section");
    box.appendChild(el("h2", {}, "Length explorer"));
    var focus = state.focus || docRoot();
    var up = el("button", {}, "up");
    up.disabled = state.trail.length === 0;
    up.onclick = function () { state.focus = state.trail.pop() || null; render(); };
    box.appendChild(up);
    box.appendChild(el("span", { "class": "muted" }, " " + focus.id + " (" + focus.size + " tokens)"));
    var layer = [focus];
    for (var depth = 0; depth < 3 && layer.length; depth++) {
      var row = el("div", { "class": "layer" }), next = [];
      var total = 0;
      layer.forEach(function (n) { total += n.size; });
      layer.forEach(function (n) {
        var c = el("div", { "class": "cell" + (n.size > state.page_tokens ? " long" : ""),
                            title: n.id + (n.heading ? " " + n.heading : "") + ": " + n.size + " tokens" },
                   n.heading || n.id);
        c.style.width = (total ? 100 * n.size / total : 0) + "%";
        c.onclick = function () { if (n !== focus) { state.trail.push(state.focus); state.focus = n; render(); } };
        row.appendChild(c);
        (n.children || []).forEach(function (k) { next.push(k); });
      });
      box.appendChild(row);
      layer = next;
    }
    return box;
  }

  function preview() {
    var s = snap(), box = el("section");
    box.appendChild(el("h2", {}, "Threshold preview"));
    function slider(key, max, count) {
      var line = el("div"), input = el("input", { type: "range", min: 0, max: max, value: state[key] });
      var out = el("span");
      function show() { out.textContent = " " + key + " = " + state[key] + ": " + count(state[key]) + " flagged"; }
      input.oninput = function () { state[key] = +input.value; show(); };
      line.appendChild(input); line.appendChild(out); show();
      box.appendChild(line);
    }
    var maxLen = 1;
    s.lengths.forEach(function (r) { maxLen = Math.max(maxLen, r.tokens); });
    slider("page_tokens", maxLen, function (t) {
      return s.lengths.filter(function (r) { return r.tokens > t; }).length;
    });
    var trees = s.trees || [], maxSize = 1, maxDepth = 1;
    trees.forEach(function (t) { maxSize = Math.max(maxSize, t.size); maxDepth = Math.max(maxDepth, t.depth); });
    slider("size_x", maxSize, function (t) { return trees.filter(function (r) { return r.size > t; }).length; });
    slider("chain_x", maxDepth, function (t) { return trees.filter(function (r) { return r.depth > t; }).length; });
    var exp = el("button", {}, "export config");
    exp.onclick = function () {
      var fragment = { page_tokens: Math.max(1, state.page_tokens), chain_x: Math.max(1, state.chain_x),
                       size_x: state.size_x > 0 ? state.size_x : null };
      var a = el("a", { download: "config.json",
                        href: "data:application/json," + encodeURIComponent(JSON.stringify(fragment, null, 1)) });
      document.body.appendChild(a); a.click(); a.remove();
    };
    box.appendChild(exp);
    return box;
  }

  function findings() {
    var s = snap(), box = el("section");
    box.appendChild(el("h2", {}, "Findings"));
    var mine = data.findings.filter(function (f) { return f.snapshot === s.label; });
    var counts = {};
    mine.forEach(function (f) { counts[f.kind] = (counts[f.kind] || 0) + 1; });
    box.appendChild(table(["kind", "count"], Object.keys(counts).sort().map(function (k) { return [k, counts[k]]; })));
    var filter = el("select");
    filter.appendChild(el("option", { value: "" }, "all kinds"));
    Object.keys(counts).sort().forEach(function (k) { filter.appendChild(el("option", { value: k }, k)); });
    filter.value = state.kind;
    filter.onchange = function () { state.kind = filter.value; render(); };
    box.appendChild(filter);
    var shown = mine.filter(function (f) { return !state.kind || f.kind === state.kind; }).slice(0, 500);
    box.appendChild(table(["kind", "element", "metrics", "excerpt"], shown.map(function (f) {
      return [f.kind, f.element, JSON.stringify(f.metrics), f.excerpt];
    })));
    return box;
  }

  function committees() {
    var p = snap().committees, box = el("section");
    if (!p || !p.rows.length) return box;
    box.appendChild(el("h2", {}, "Committee profiles (per 1,000 tokens)"));
    box.appendChild(table(["committee"].concat(p.columns), p.rows.map(function (r, i) {
      return [(p.defunct[i] ? "(defunct) " : "") + r].concat(p.cells[i].map(function (v) { return v.toFixed(3); }));
    })));
    return box;
  }

  function render() {
    body.textContent = "";
    body.appendChild(icicle());
    body.appendChild(preview());
    body.appendChild(findings());
    body.appendChild(committees());
  }
  render();
})();
)JS";

}  // namespace

std::string_view builtin_viewer_script() { return kViewer; }

}  // namespace lawsmells
