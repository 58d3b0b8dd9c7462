#pragma once

#include <string>

#include "Node.h"

namespace cocos2d {

class Label : public Node {
public:
    /// Creates a label with a TTF font file, a text string and a font size.
    static Label* createWithTTF(const std::string& text, const std::string& fontFile,
                                float fontSize);

    /// Sets the scale of the rendered glyphs.
    void setScale(float scale);
};

}  // namespace cocos2d
