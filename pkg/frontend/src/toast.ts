/** Transient banners for move rejections (with rule citations) and errors. */

export class Toaster {
  private timer: number | undefined;

  constructor(private readonly container: HTMLElement) {}

  show(message: string, rule?: string, kind: "error" | "info" = "error"): void {
    this.container.replaceChildren();
    const toast = document.createElement("div");
    toast.className = `toast ${kind}`;
    if (rule) {
      const badge = document.createElement("span");
      badge.className = "rule-badge";
      badge.textContent = rule;
      toast.appendChild(badge);
    }
    const text = document.createElement("span");
    text.textContent = message;
    toast.appendChild(text);
    this.container.appendChild(toast);
    if (this.timer !== undefined) window.clearTimeout(this.timer);
    this.timer = window.setTimeout(() => this.container.replaceChildren(), 6000);
  }
}
