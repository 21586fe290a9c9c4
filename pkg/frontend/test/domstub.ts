/** Minimal structural DOM stand-in so the renderer runs under node. */

import { DocumentLike, ElementLike } from "../src/render.js";

export class StubElement implements ElementLike {
  tag: string;
  className = "";
  children: StubElement[] = [];
  private attrs = new Map<string, string>();
  private text = "";

  constructor(tag: string) {
    this.tag = tag;
  }

  get textContent(): string {
    if (this.children.length === 0) return this.text;
    return this.children.map((c) => c.textContent).join("");
  }

  set textContent(value: string | null) {
    this.children = [];
    this.text = value ?? "";
  }

  appendChild(child: ElementLike): unknown {
    this.children.push(child as StubElement);
    return child;
  }

  replaceChildren(...children: ElementLike[]): void {
    this.text = "";
    this.children = children as StubElement[];
  }

  setAttribute(name: string, value: string): void {
    this.attrs.set(name, value);
  }

  getAttribute(name: string): string | undefined {
    return this.attrs.get(name);
  }

  /** Depth-first search by class name, for assertions. */
  findAll(className: string): StubElement[] {
    const out: StubElement[] = [];
    const walk = (el: StubElement) => {
      if (el.className.split(" ").includes(className)) out.push(el);
      el.children.forEach(walk);
    };
    walk(this);
    return out;
  }
}

export class StubDocument implements DocumentLike {
  createElement(tag: string): ElementLike {
    return new StubElement(tag);
  }
}
