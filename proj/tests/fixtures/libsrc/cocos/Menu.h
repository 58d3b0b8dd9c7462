#pragma once

#include "Node.h"

namespace cocos2d {

class MenuItemImage : public Node {
public:
    /// Creates a menu item with normal and selected state images.
    static MenuItemImage* create(const char* normalImage, const char* selectedImage);
};

class Menu : public Node {
public:
    /// Creates a menu from a null-terminated list of items.
    static Menu* create(Node* item, ...);
};

}  // namespace cocos2d
