import { ApiClient, TooLargeError } from "./api.js";
import { findOverlongRuns, renderPatternGrid } from "./grid.js";
import { renderScatter } from "./scatter.js";
import { StudioStore } from "./store.js";
import type { RuleMetricsEntry } from "./types.js";

const MAX_FLOAT_DEFAULT = 5;

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function formatRatio(h: RuleMetricsEntry["h"]): string {
  return h === "inf" ? "∞" : String(h);
}

function metricsPanel(
  doc: Document,
  metrics: RuleMetricsEntry | null,
): HTMLElement {
  const panel = el(doc, "dl", "metrics-panel");
  if (!metrics) return panel;
  const rows: Array<[string, string]> = [
    ["H", String(metrics.H)],
    ["h", formatRatio(metrics.h)],
    ["H_block", String(metrics.H_block)],
    ["max warp float", String(metrics.max_warp_float)],
    ["max weft float", String(metrics.max_weft_float)],
    ["weaveable", metrics.weaveable ? "yes" : `no (${metrics.reasons.join(", ")})`],
  ];
  for (const [label, value] of rows) {
    const dt = el(doc, "dt", undefined, label);
    const dd = el(doc, "dd", `metric-${label.replace(/[ _]/g, "-")}`, value);
    panel.appendChild(dt);
    panel.appendChild(dd);
  }
  return panel;
}

function numberInput(
  doc: Document,
  label: string,
  value: number,
  onChange: (value: number) => void,
): HTMLElement {
  const wrap = el(doc, "label", "control", label + " ");
  const input = el(doc, "input");
  input.type = "number";
  input.value = String(value);
  input.addEventListener("change", () => onChange(Number(input.value)));
  wrap.appendChild(input);
  return wrap;
}

/** Build the studio page inside `root` and start loading data. */
export function mountStudio(
  root: HTMLElement,
  client: ApiClient = new ApiClient(),
): StudioStore {
  const doc = root.ownerDocument;
  const store = new StudioStore(client);

  const banner = el(doc, "div", "retry-banner hidden");
  banner.setAttribute("role", "alert");
  const retry = el(doc, "button", undefined, "Retry");
  retry.addEventListener("click", () => void store.loadRuleSpace());
  banner.appendChild(doc.createTextNode("Design service unreachable. "));
  banner.appendChild(retry);

  const scatterHost = el(doc, "section", "scatter-host");
  const filterLabel = el(doc, "label", "weaveable-filter", "Weaveable only ");
  const filter = el(doc, "input");
  filter.type = "checkbox";
  filterLabel.appendChild(filter);

  const workbench = el(doc, "section", "workbench");
  const rasterPanel = el(doc, "section", "raster-panel");
  const rasterStatus = el(doc, "p", "raster-status");
  const fileInput = el(doc, "input");
  fileInput.type = "file";
  fileInput.setAttribute("aria-label", "import image");
  const repairLabel = el(doc, "label", undefined, "Repair floats ");
  const repairToggle = el(doc, "input");
  repairToggle.type = "checkbox";
  repairToggle.checked = true;
  repairLabel.appendChild(repairToggle);
  rasterPanel.append(fileInput, repairLabel, rasterStatus);

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void client
      .uploadRaster(file, file.name, {
        width: 64,
        height: 64,
        repair: repairToggle.checked,
      })
      .then((payload) => store.adoptRasterSession(payload))
      .catch((error) => {
        rasterStatus.textContent =
          error instanceof TooLargeError
            ? "Image too large (4 MiB / 4096 px limit)."
            : `Import failed: ${error.message}`;
      });
  });

  const render = () => {
    const state = store.state;
    banner.classList.toggle("hidden", !state.offline);

    scatterHost.replaceChildren(filterLabel);
    if (state.ruleTable.length > 0) {
      scatterHost.appendChild(
        renderScatter(doc, state.ruleTable, {
          weaveableOnly: filter.checked,
          onSelect: (rule) => void store.openRule(rule),
        }),
      );
    }

    workbench.replaceChildren();
    const session = state.session;
    if (!session) return;

    const controls = el(doc, "div", "controls");
    controls.append(
      numberInput(doc, "width", state.controls.width, (width) =>
        store.updateControls({ width }),
      ),
      numberInput(doc, "steps", state.controls.steps, (steps) =>
        store.updateControls({ steps }),
      ),
      numberInput(doc, "seed", state.controls.seed, (seed) =>
        store.updateControls({ seed }),
      ),
    );

    if (state.replayPrompt) {
      const prompt = el(
        doc,
        "p",
        "replay-prompt",
        "Session changed elsewhere; review and re-apply your edit.",
      );
      workbench.appendChild(prompt);
    }

    const cells = store.cells;
    const overlay = findOverlongRuns(cells, MAX_FLOAT_DEFAULT);
    const grid = renderPatternGrid(doc, cells, {
      initRows: session.document.grid.init_rows,
      overlay,
      onToggleSeed: (column) => store.toggleSeedCell(column),
    });

    const exports = el(doc, "div", "exports");
    const wif = el(doc, "a", undefined, "Download WIF");
    wif.setAttribute("href", client.draftUrl(session.id));
    const png = el(doc, "a", undefined, "Download PNG");
    png.setAttribute("href", client.renderUrl(session.id));
    exports.append(wif, png);

    workbench.append(controls, metricsPanel(doc, store.metrics), grid, exports);
    if (state.viewMode === "cloth-render") {
      const img = el(doc, "img", "cloth-render");
      img.setAttribute("src", client.renderUrl(session.id));
      img.setAttribute("alt", "cloth render");
      workbench.appendChild(img);
    }
  };

  filter.addEventListener("change", render);
  store.subscribe(render);
  root.append(banner, scatterHost, workbench, rasterPanel);
  void store.loadRuleSpace();
  return store;
}
