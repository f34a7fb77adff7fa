/** Press-and-hold "speech" input: typed text stands in for dictation.
 *
 * Holding a context element (date label or aggregation plot) overlays an
 * input panel with a contextual hint; whatever was typed when the press is
 * released posts as the utterance, carrying that element as the pressed
 * context. Releasing with nothing typed falls back to the element's tap
 * action (e.g. the calendar picker on date labels).
 *
 * A real microphone source could feed the same panel by writing the
 * recognized text into it before release; the engine only ever sees text.
 */

export interface HoldPanelCallbacks {
  onSubmit: (text: string) => void;
  onTap?: () => void;
}

export class SpeechPanel {
  private readonly overlay: HTMLDivElement;
  private readonly input: HTMLInputElement;
  private readonly hintEl: HTMLParagraphElement;
  private active: HoldPanelCallbacks | null = null;
  private releaseListener: (() => void) | null = null;

  constructor(host: HTMLElement) {
    this.overlay = document.createElement("div");
    this.overlay.className = "speech-overlay hidden";
    const panel = document.createElement("div");
    panel.className = "speech-panel";
    this.hintEl = document.createElement("p");
    this.hintEl.className = "speech-hint";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.className = "speech-input";
    this.input.setAttribute("aria-label", "speech input");
    panel.appendChild(this.hintEl);
    panel.appendChild(this.input);
    this.overlay.appendChild(panel);
    host.appendChild(this.overlay);
  }

  /** Wire an element as a hold-to-speak target. */
  attach(el: HTMLElement, hint: string, callbacks: HoldPanelCallbacks): void {
    const begin = (event: Event) => {
      event.preventDefault();
      this.open(hint, callbacks);
    };
    el.addEventListener("mousedown", begin);
    el.addEventListener("touchstart", begin, { passive: false });
  }

  private open(hint: string, callbacks: HoldPanelCallbacks): void {
    this.active = callbacks;
    this.hintEl.textContent = hint;
    this.input.value = "";
    this.overlay.classList.remove("hidden");
    this.input.focus();
    const release = () => this.release();
    this.releaseListener = release;
    document.addEventListener("mouseup", release, { once: true });
    document.addEventListener("touchend", release, { once: true });
  }

  private release(): void {
    if (this.active === null) return;
    const callbacks = this.active;
    const text = this.input.value.trim();
    this.close();
    if (text) {
      callbacks.onSubmit(text);
    } else if (callbacks.onTap) {
      callbacks.onTap();
    }
  }

  private close(): void {
    this.active = null;
    this.overlay.classList.add("hidden");
    if (this.releaseListener) {
      document.removeEventListener("mouseup", this.releaseListener);
      document.removeEventListener("touchend", this.releaseListener);
      this.releaseListener = null;
    }
  }

  get isOpen(): boolean {
    return this.active !== null;
  }

  /** Test hook: the panel's text field (dictation target). */
  get field(): HTMLInputElement {
    return this.input;
  }
}
