#pragma once

#include <string>

#include "Node.h"

namespace cocos2d {

class Sprite : public Node {
public:
    /// Creates a sprite with an image filename and returns an autoreleased
    /// instance.
    static Sprite* create(const std::string& filename);

    /// Sets the scale of the sprite, changing both width and height.
    void setScale(float scale);

    /// Sets the texture flip on the horizontal axis.
    void setFlippedX(bool flipped);

private:
    std::string filename_;
};

}  // namespace cocos2d
