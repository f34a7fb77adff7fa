/** Exploration UI: four pages rendered purely from server StateViews.
 *
 * The controller never computes statistics or mutates state locally; every
 * interaction posts to the engine and the whole page re-renders from the
 * returned view. Requests are serialized (one in flight) so feedback and
 * state always correspond to the last action.
 */

import {
  CommandResponse,
  FeedbackJson,
  Pressed,
  SessionClient,
  StateView,
} from "./api.js";
import { renderAggregationPlot, renderDailyChart } from "./charts.js";
import { SpeechPanel } from "./speech.js";

const SOURCE_LABELS: Record<string, string> = {
  step_count: "Step Count",
  resting_heart_rate: "Resting Heart Rate",
  sleep_range: "Sleep Range",
  hours_slept: "Hours Slept",
  weight: "Weight",
};

const COMPARATOR_LABELS: Record<string, string> = {
  lt: "less than",
  lte: "at most",
  gt: "more than",
  gte: "at least",
  min: "minimum",
  max: "maximum",
};

const CLOCK_COMPARATOR_LABELS: Record<string, string> = {
  ...COMPARATOR_LABELS,
  lt: "earlier than",
  gt: "later than",
};

const ASPECT_LABELS: Record<string, string> = {
  value: "value",
  bedtime: "bedtime",
  wake_time: "wake time",
  goal_ref: "step goal",
};

const COMPARATOR_CYCLE = ["lt", "lte", "gt", "gte"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(id: string, label: string, onClick: () => void): HTMLButtonElement {
  const node = el("button", "btn", label);
  node.id = id;
  node.addEventListener("click", onClick);
  return node;
}

export class App {
  view!: StateView;
  lastFeedback: FeedbackJson | null = null;

  private readonly header: HTMLElement;
  private readonly queryBar: HTMLElement;
  private readonly main: HTMLElement;
  private readonly toolbar: HTMLElement;
  private readonly feedbackArea: HTMLElement;
  private readonly speech: SpeechPanel;
  private tail: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly client: SessionClient,
  ) {
    this.header = el("header", "app-header");
    this.queryBar = el("div", "query-bar hidden");
    this.main = el("main", "charts");
    this.toolbar = el("footer", "toolbar");
    this.feedbackArea = el("div", "feedback-area");
    root.replaceChildren(
      this.header,
      this.queryBar,
      this.main,
      this.feedbackArea,
      this.toolbar,
    );
    this.speech = new SpeechPanel(root);
  }

  static async create(root: HTMLElement, baseUrl = ""): Promise<App> {
    const client = new SessionClient(baseUrl);
    const app = new App(root, client);
    app.view = await client.create();
    app.render();
    return app;
  }

  /** Serialize server work; `idle()` resolves when the queue drains. */
  private enqueue(work: () => Promise<void>): void {
    this.tail = this.tail.then(work).catch((err) => {
      this.showFeedback({
        kind: "invalid",
        message: `Network problem: ${String(err)}. The previous view is unchanged.`,
      });
    });
  }

  idle(): Promise<void> {
    return this.tail;
  }

  private apply(response: CommandResponse): void {
    this.view = response.state;
    this.lastFeedback = response.feedback;
    this.render();
    this.showFeedback(response.feedback);
  }

  command(utterance: string, pressed: Pressed = { kind: "none" }): void {
    this.enqueue(async () => this.apply(await this.client.command(utterance, pressed)));
  }

  intent(payload: { type: string } & Record<string, unknown>): void {
    this.enqueue(async () => this.apply(await this.client.intent(payload)));
  }

  /** The authoritative view as the server currently holds it. */
  serverState(): Promise<StateView> {
    return this.client.state();
  }

  /** Re-fetch the authoritative state; used by the hidden-state audit. */
  async auditDivergence(): Promise<boolean> {
    const fresh = await this.serverState();
    return JSON.stringify(fresh) !== JSON.stringify(this.view);
  }

  // -- rendering -------------------------------------------------------------

  render(): void {
    this.renderHeader();
    this.renderQueryBar();
    this.renderMain();
    this.renderToolbar();
  }

  private highlightSet(): Set<string> {
    return new Set(this.view.query?.dates ?? []);
  }

  private renderHeader(): void {
    const { view } = this;
    this.header.replaceChildren();

    const rangeWidget = el("div", "range-widget");
    rangeWidget.appendChild(
      button("swipe-back", "‹", () => this.intent({ type: "swipe", direction: "back" })),
    );

    const startLabel = el("span", "date-label", view.range.start);
    startLabel.id = "start-date-label";
    const endLabel = el("span", "date-label", view.range.end);
    endLabel.id = "end-date-label";
    this.speech.attach(startLabel, "Say a new date", {
      onSubmit: (text) => this.command(text, { kind: "start_date_label" }),
      onTap: () => this.openCalendar("start"),
    });
    this.speech.attach(endLabel, "Say a new date", {
      onSubmit: (text) => this.command(text, { kind: "end_date_label" }),
      onTap: () => this.openCalendar("end"),
    });
    rangeWidget.appendChild(startLabel);
    rangeWidget.appendChild(el("span", "range-sep", "–"));
    rangeWidget.appendChild(endLabel);
    rangeWidget.appendChild(
      button("swipe-forward", "›", () =>
        this.intent({ type: "swipe", direction: "forward" }),
      ),
    );
    this.header.appendChild(rangeWidget);

    if (view.page !== "home") {
      const select = el("select", "source-select");
      select.id = "source-select";
      for (const [value, label] of Object.entries(SOURCE_LABELS)) {
        const option = el("option", undefined, label) as HTMLOptionElement;
        option.value = value;
        select.appendChild(option);
      }
      const current = view.source ?? view.comparison?.source ?? view.cycle?.source;
      if (current) select.value = current;
      select.addEventListener("change", () =>
        this.intent({ type: "set_source", source: select.value }),
      );
      this.header.appendChild(select);
    }

    const title = el("h1", "page-title", this.pageTitle());
    this.header.appendChild(title);
  }

  private pageTitle(): string {
    const { view } = this;
    switch (view.page) {
      case "home":
        return "Home";
      case "detail":
        return SOURCE_LABELS[view.source ?? ""] ?? "Detail";
      case "two_range":
        return `Comparing ${SOURCE_LABELS[view.comparison?.source ?? ""] ?? ""}`;
      case "cyclical":
        return `${SOURCE_LABELS[view.cycle?.source ?? ""] ?? ""} by ${
          this.view.cycle?.cycle === "day_of_week" ? "day of week" : "month"
        }`;
    }
  }

  private openCalendar(which: "start" | "end"): void {
    const input = el("input") as HTMLInputElement;
    input.type = "date";
    input.id = `calendar-${which}`;
    input.value = which === "start" ? this.view.range.start : this.view.range.end;
    input.addEventListener("change", () => {
      this.intent({ type: `set_${which}_date`, date: input.value });
      input.remove();
    });
    this.header.appendChild(input);
    try {
      input.showPicker?.();
    } catch {
      // picker needs a user gesture in some browsers; the field suffices
    }
  }

  private renderQueryBar(): void {
    const query = this.view.query;
    this.queryBar.replaceChildren();
    if (!query) {
      this.queryBar.classList.add("hidden");
      return;
    }
    this.queryBar.classList.remove("hidden");

    const chips = el("div", "chips");
    chips.appendChild(this.chip("chip-source", SOURCE_LABELS[query.source] ?? query.source));

    const aspectChip = this.chip("chip-aspect", ASPECT_LABELS[query.aspect] ?? query.aspect);
    if (query.source === "sleep_range") {
      aspectChip.classList.add("editable");
      aspectChip.addEventListener("click", () => {
        const next = query.aspect === "bedtime" ? "wake_time" : "bedtime";
        this.intent({ type: "edit_query_param", index: 0, value: next });
      });
    }
    chips.appendChild(aspectChip);

    const clockish = query.aspect === "bedtime" || query.aspect === "wake_time";
    const labels = clockish ? CLOCK_COMPARATOR_LABELS : COMPARATOR_LABELS;
    const comparatorChip = this.chip("chip-comparator", labels[query.comparator]);
    if (query.aspect !== "goal_ref") {
      comparatorChip.classList.add("editable");
      comparatorChip.addEventListener("click", () => {
        const cycle = COMPARATOR_CYCLE.includes(query.comparator)
          ? COMPARATOR_CYCLE
          : ["min", "max"];
        const next = cycle[(cycle.indexOf(query.comparator) + 1) % cycle.length];
        this.intent({ type: "edit_query_param", index: 1, value: next });
      });
    }
    chips.appendChild(comparatorChip);

    if (query.operand) {
      const text =
        "clock" in query.operand
          ? query.operand.clock
          : `${query.operand.value}${query.operand.unit ? " " + query.operand.unit : ""}`;
      const operandChip = this.chip("chip-operand", text);
      operandChip.classList.add("editable");
      operandChip.addEventListener("click", () => this.editOperand(operandChip));
      chips.appendChild(operandChip);
    }

    const count = el("span", "query-count", `${query.count} days`);
    count.id = "query-count";
    chips.appendChild(count);

    const dismiss = button("dismiss-query", "✕", () =>
      this.intent({ type: "dismiss_query" }),
    );
    chips.appendChild(dismiss);
    this.queryBar.appendChild(chips);
  }

  private chip(id: string, text: string): HTMLSpanElement {
    const node = el("span", "chip", text);
    node.id = id;
    return node;
  }

  private editOperand(chip: HTMLElement): void {
    const query = this.view.query;
    if (!query || !query.operand) return;
    const input = el("input", "operand-input") as HTMLInputElement;
    input.id = "operand-input";
    input.value = "clock" in query.operand ? query.operand.clock : String(query.operand.value);
    chip.replaceChildren(input);
    input.focus();
    input.addEventListener("keydown", (event) => {
      if (event.key !== "Enter") return;
      const raw = input.value.trim();
      if ("clock" in query.operand!) {
        this.intent({ type: "edit_query_param", index: 2, value: { clock: raw } });
      } else {
        this.intent({
          type: "edit_query_param",
          index: 2,
          value: { value: Number(raw), unit: query.operand!.unit },
        });
      }
    });
  }

  private renderMain(): void {
    const { view } = this;
    this.main.replaceChildren();
    const highlights = this.highlightSet();

    if (view.page === "home" || view.page === "detail") {
      for (const [source, records] of Object.entries(view.charts)) {
        const section = el("section", "chart-section");
        section.dataset.source = source;
        section.appendChild(el("h2", "chart-title", SOURCE_LABELS[source] ?? source));
        section.appendChild(renderDailyChart(source, records, view.range, highlights));
        this.main.appendChild(section);
      }
      return;
    }

    if (view.page === "two_range" && view.comparison) {
      const { comparison } = view;
      const row = el("div", "compare-row");
      const slots: ["a" | "b", string, typeof comparison.stats_a][] = [
        ["a", `${comparison.range_a.start} – ${comparison.range_a.end}`, comparison.stats_a],
        ["b", `${comparison.range_b.start} – ${comparison.range_b.end}`, comparison.stats_b],
      ];
      for (const [slot, caption, stats] of slots) {
        const holder = el("div", "plot-holder");
        holder.id = `plot-${slot}`;
        holder.appendChild(renderAggregationPlot(stats, caption));
        this.speech.attach(holder, "Say a new period", {
          onSubmit: (text) =>
            this.command(text, { kind: "aggregation_plot", slot }),
        });
        row.appendChild(holder);
      }
      this.main.appendChild(row);
      return;
    }

    if (view.page === "cyclical" && view.cycle) {
      const row = el("div", "cycle-row");
      for (const group of view.cycle.groups) {
        const holder = el("div", "plot-holder cycle-group");
        holder.dataset.groupId = String(group.id);
        holder.appendChild(renderAggregationPlot(group.stats, group.label));
        row.appendChild(holder);
      }
      this.main.appendChild(row);
    }
  }

  private renderToolbar(): void {
    this.toolbar.replaceChildren();
    this.toolbar.appendChild(button("home-btn", "Home", () => this.intent({ type: "go_home" })));
    this.toolbar.appendChild(
      button("compare-btn", "Compare", () => this.openComparePanel()),
    );

    const globalInput = el("input", "global-input") as HTMLInputElement;
    globalInput.id = "global-input";
    globalInput.placeholder = "Type a command (simulated speech)…";
    const send = () => {
      if (globalInput.value.trim()) {
        this.command(globalInput.value.trim());
        globalInput.value = "";
      }
    };
    globalInput.addEventListener("keydown", (event) => {
      if (event.key === "Enter") send();
    });
    this.toolbar.appendChild(globalInput);
    this.toolbar.appendChild(button("global-go", "▶", send));
  }

  private openComparePanel(): void {
    const existing = this.root.querySelector(".compare-panel");
    if (existing) {
      existing.remove();
      return;
    }
    const panel = el("div", "compare-panel");
    panel.appendChild(el("h3", undefined, "Configure comparison"));

    const typeSelect = el("select") as HTMLSelectElement;
    typeSelect.id = "compare-type";
    for (const [value, label] of [
      ["two_range", "Two ranges"],
      ["cyclical", "By cycle"],
    ]) {
      const option = el("option", undefined, label) as HTMLOptionElement;
      option.value = value;
      typeSelect.appendChild(option);
    }
    panel.appendChild(typeSelect);

    const sourceSelect = el("select") as HTMLSelectElement;
    sourceSelect.id = "compare-source";
    for (const [value, label] of Object.entries(SOURCE_LABELS)) {
      const option = el("option", undefined, label) as HTMLOptionElement;
      option.value = value;
      sourceSelect.appendChild(option);
    }
    if (this.view.source) sourceSelect.value = this.view.source;
    panel.appendChild(sourceSelect);

    const dateField = (id: string, value: string): HTMLInputElement => {
      const input = el("input") as HTMLInputElement;
      input.type = "date";
      input.id = id;
      input.value = value;
      panel.appendChild(input);
      return input;
    };
    const rangeStartA = dateField("compare-a-start", this.view.range.start);
    const rangeEndA = dateField("compare-a-end", this.view.range.end);
    const rangeStartB = dateField("compare-b-start", this.view.range.start);
    const rangeEndB = dateField("compare-b-end", this.view.range.end);

    const cycleSelect = el("select") as HTMLSelectElement;
    cycleSelect.id = "compare-cycle";
    for (const [value, label] of [
      ["month_of_year", "Months of the year"],
      ["day_of_week", "Days of the week"],
    ]) {
      const option = el("option", undefined, label) as HTMLOptionElement;
      option.value = value;
      cycleSelect.appendChild(option);
    }
    panel.appendChild(cycleSelect);

    panel.appendChild(
      button("compare-apply", "Apply", () => {
        if (typeSelect.value === "two_range") {
          this.intent({
            type: "compare_two_ranges",
            source: sourceSelect.value,
            range_a: { start: rangeStartA.value, end: rangeEndA.value },
            range_b: { start: rangeStartB.value, end: rangeEndB.value },
          });
        } else {
          this.intent({
            type: "compare_cyclical",
            source: sourceSelect.value,
            range: { start: rangeStartA.value, end: rangeEndA.value },
            cycle: cycleSelect.value,
          });
        }
        panel.remove();
      }),
    );
    this.root.appendChild(panel);
  }

  private showFeedback(feedback: FeedbackJson): void {
    this.feedbackArea.replaceChildren();
    if (feedback.kind === "executed") {
      const toast = el("div", "toast", feedback.message + " ");
      toast.id = "toast";
      if (feedback.undoable) {
        toast.appendChild(
          button("undo-btn", "Undo", () => this.intent({ type: "undo" })),
        );
      }
      this.feedbackArea.appendChild(toast);
      return;
    }
    if (feedback.kind === "invalid") {
      const dialog = el("div", "invalid-dialog");
      dialog.id = "invalid-dialog";
      dialog.appendChild(el("p", "invalid-message", feedback.message));
      if (feedback.suggestion) {
        dialog.appendChild(el("p", "invalid-suggestion", feedback.suggestion));
      }
      dialog.appendChild(button("dialog-ok", "OK", () => dialog.remove()));
      this.feedbackArea.appendChild(dialog);
      return;
    }
    const notice = el("div", "notice", feedback.message);
    notice.id = "notice";
    this.feedbackArea.appendChild(notice);
  }
}

export async function mount(selector = "#app", baseUrl = ""): Promise<App> {
  const root = document.querySelector<HTMLElement>(selector);
  if (!root) throw new Error(`no element matches ${selector}`);
  return App.create(root, baseUrl);
}
